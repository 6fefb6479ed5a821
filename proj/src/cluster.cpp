#include "oneway/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oneway::cluster {

using qcore::DensityMatrix;
using qcore::SingleQubitGate;
using qcore::StateVector;

ClusterGraph::ClusterGraph(int num_nodes, std::vector<Edge> edges) : num_nodes_(num_nodes) {
  if (num_nodes < 1 || num_nodes > qcore::kMaxQubits) {
    throw std::invalid_argument("cluster graphs need 1.." + std::to_string(qcore::kMaxQubits) + " nodes");
  }
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_nodes || b >= num_nodes) {
      throw std::invalid_argument("edge (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range");
    }
    if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
    const Edge canonical{std::min(a, b), std::max(a, b)};
    if (std::find(edges_.begin(), edges_.end(), canonical) == edges_.end()) edges_.push_back(canonical);
  }
}

ClusterGraph ClusterGraph::box() { return ClusterGraph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

ClusterGraph ClusterGraph::horseshoe() { return ClusterGraph(4, {{0, 1}, {1, 2}, {2, 3}}); }

ClusterGraph ClusterGraph::linear(int num_nodes) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < num_nodes; ++i) edges.emplace_back(i, i + 1);
  return ClusterGraph(num_nodes, std::move(edges));
}

std::vector<int> ClusterGraph::neighbors(int node) const {
  std::vector<int> out;
  for (const auto& [a, b] : edges_) {
    if (a == node) out.push_back(b);
    if (b == node) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

StateVector build_cluster(const ClusterGraph& graph) {
  const auto dim = Eigen::Index{1} << graph.num_nodes();
  StateVector state(qcore::Vector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
  for (const auto& [a, b] : graph.edges()) state = qcore::apply_cphase(state, a, b);
  return state;
}

qcore::PauliString stabilizer_generator(const ClusterGraph& graph, int node) {
  if (node < 0 || node >= graph.num_nodes()) throw std::out_of_range("stabilizer node out of range");
  qcore::PauliString p;
  p.letters.assign(static_cast<std::size_t>(graph.num_nodes()), 'I');
  p.letters[node] = 'X';
  for (int j : graph.neighbors(node)) p.letters[j] = 'Z';
  return p;
}

StateVector c4_state() {
  qcore::Vector v = qcore::Vector::Zero(16);
  v(0b0000) = 0.5;
  v(0b0011) = 0.5;
  v(0b1100) = 0.5;
  v(0b1111) = -0.5;
  return StateVector(std::move(v));
}

namespace {

template <class State>
State box_frame(const State& s) {
  State out = qcore::apply_swap(s, 1, 2);
  for (int q = 0; q < 4; ++q) out = qcore::apply_gate(out, q, SingleQubitGate::hadamard());
  return out;
}

template <class State>
State horseshoe_frame(const State& s) {
  State out = qcore::apply_gate(s, 0, SingleQubitGate::hadamard());
  return qcore::apply_gate(out, 3, SingleQubitGate::hadamard());
}

template <class State>
void require_four_qubits(const State& s) {
  if (s.num_qubits() != 4) throw std::invalid_argument("cluster frames act on four qubits");
}

}  // namespace

StateVector to_box_frame(const StateVector& state) {
  require_four_qubits(state);
  return box_frame(state);
}

DensityMatrix to_box_frame(const DensityMatrix& rho) {
  require_four_qubits(rho);
  return box_frame(rho);
}

StateVector to_horseshoe_frame(const StateVector& state) {
  require_four_qubits(state);
  return horseshoe_frame(state);
}

DensityMatrix to_horseshoe_frame(const DensityMatrix& rho) {
  require_four_qubits(rho);
  return horseshoe_frame(rho);
}

Equivalence box_equivalence() {
  StateVector graph = build_cluster(ClusterGraph::box());
  StateVector transformed = to_box_frame(c4_state());
  const double ov = qcore::overlap(graph, transformed);
  return {std::move(graph), std::move(transformed), ov};
}

Equivalence horseshoe_equivalence() {
  StateVector graph = build_cluster(ClusterGraph::horseshoe());
  StateVector transformed = to_horseshoe_frame(c4_state());
  const double ov = qcore::overlap(graph, transformed);
  return {std::move(graph), std::move(transformed), ov};
}

}  // namespace oneway::cluster
