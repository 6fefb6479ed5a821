#pragma once

// Graph (cluster) states and the local-unitary frames linking the box and
// horseshoe graphs to the physical four-qubit state |C4>.
//
// Node i of a graph is qubit i (qubit 0 = first qubit, most significant bit).
// Box and horseshoe node numbers 1..4 in the docs are indices 0..3 here.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "oneway/qcore.hpp"

namespace oneway::cluster {

using Edge = std::pair<int, int>;

class ClusterGraph {
 public:
  /// Rejects self-loops and out-of-range nodes; duplicate edges (in either
  /// orientation) are dropped, keeping first-occurrence order.
  ClusterGraph(int num_nodes, std::vector<Edge> edges);

  /// Four-node ring 1-2, 2-3, 3-4, 4-1.
  static ClusterGraph box();
  /// Four-node chain 1-2, 2-3, 3-4.
  static ClusterGraph horseshoe();
  static ClusterGraph linear(int num_nodes);

  int num_nodes() const { return num_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<int> neighbors(int node) const;

 private:
  int num_nodes_;
  std::vector<Edge> edges_;
};

/// (|+>^n with one CPhase per edge, applied in edge order.
qcore::StateVector build_cluster(const ClusterGraph& graph);

/// K_i = X_i prod_{j in N(i)} Z_j.
qcore::PauliString stabilizer_generator(const ClusterGraph& graph, int node);

/// (|0000> + |0011> + |1100> - |1111>) / 2.
qcore::StateVector c4_state();

/// The six stabilizer elements of |C4> entering the witness, in reporting order.
inline constexpr std::array<const char*, 6> kWitnessTerms{"XXIZ", "XXZI", "IIZZ", "IZXX", "ZIXX", "ZZII"};

// Local frames. box frame: (H x H x H x H) SWAP(2,3); horseshoe frame: H x I x I x H.
// Both maps are involutions, so they also carry graph-frame states back to the lab frame.
qcore::StateVector to_box_frame(const qcore::StateVector& state);
qcore::DensityMatrix to_box_frame(const qcore::DensityMatrix& rho);
qcore::StateVector to_horseshoe_frame(const qcore::StateVector& state);
qcore::DensityMatrix to_horseshoe_frame(const qcore::DensityMatrix& rho);

struct Equivalence {
  qcore::StateVector graph_state;
  qcore::StateVector transformed_c4;
  double overlap;
};

/// build_cluster(box) against H^{x4} SWAP(2,3) |C4>.
Equivalence box_equivalence();
/// build_cluster(horseshoe) against (H x I x I x H) |C4>.
Equivalence horseshoe_equivalence();

}  // namespace oneway::cluster
