#include "oneway/mbqc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "oneway/cluster.hpp"
#include "oneway/photonics.hpp"

namespace oneway::mbqc {

using qcore::Complex;
using qcore::DensityMatrix;
using qcore::OutcomeSource;
using qcore::SingleQubitGate;
using qcore::StateVector;

namespace {

constexpr double kPi = std::numbers::pi;

// Box node carrying each physical qubit: the box frame swaps qubits 2 and 3.
constexpr std::array<int, 4> kBoxNodeOf{0, 2, 1, 3};

SingleQubitGate pauli_gate(char p) {
  switch (p) {
    case 'X': return SingleQubitGate::pauli_x();
    case 'Y': return SingleQubitGate::pauli_y();
    case 'Z': return SingleQubitGate::pauli_z();
    default: throw std::invalid_argument(std::string("unsupported correction Pauli '") + p + "'");
  }
}

template <class State>
PatternResult<State> run_pattern_impl(const State& state, const MeasurementPattern& pattern, OutcomeSource& source) {
  pattern.validate(state.num_qubits());
  std::vector<int> alive(static_cast<std::size_t>(state.num_qubits()));
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<int>(i);

  OutcomeRecord record;
  State current = state;
  for (const auto& step : pattern.steps) {
    const auto it = std::find(alive.begin(), alive.end(), step.qubit);
    const int position = static_cast<int>(it - alive.begin());
    auto result = qcore::measure(current, position, step.alpha, source);
    record.s[step.qubit] = result.outcome;
    record.probabilities[step.qubit] = result.probability;
    current = std::move(result.residual);
    alive.erase(it);
  }

  // Bring the residual into readout order by selection sort on positions.
  for (std::size_t want = 0; want < pattern.readout.size(); ++want) {
    const auto it = std::find(alive.begin() + static_cast<std::ptrdiff_t>(want), alive.end(), pattern.readout[want]);
    const auto have = static_cast<std::size_t>(it - alive.begin());
    if (have != want) {
      current = qcore::apply_swap(current, static_cast<int>(want), static_cast<int>(have));
      std::swap(alive[want], alive[have]);
    }
  }

  for (const auto& c : pattern.corrections) {
    if (record.s.at(c.source) == 0) continue;
    const auto pos = std::find(pattern.readout.begin(), pattern.readout.end(), c.target) - pattern.readout.begin();
    current = qcore::apply_gate(current, static_cast<int>(pos), pauli_gate(c.pauli));
  }
  return {std::move(record), std::move(current)};
}

StateVector plus_plus() { return StateVector(qcore::Vector::Constant(4, 0.5)); }

StateVector apply_if(const StateVector& s, bool condition, int qubit, const SingleQubitGate& g) {
  return condition ? qcore::apply_gate(s, qubit, g) : s;
}

void check_gate_spec(const GateOutputSpec& spec, ClusterKind expected) {
  if (spec.cluster_kind != expected) throw std::invalid_argument("gate spec has the wrong cluster kind");
  if (!std::isfinite(spec.alpha) || !std::isfinite(spec.beta)) throw std::invalid_argument("gate angles must be finite");
  if ((spec.s2 != 0 && spec.s2 != 1) || (spec.s3 != 0 && spec.s3 != 1)) {
    throw std::invalid_argument("gate outcomes must be bits");
  }
}

StateVector rotate_and_hadamard(StateVector s, double alpha, double beta) {
  s = qcore::apply_gate(s, 0, SingleQubitGate::rz(-alpha));
  s = qcore::apply_gate(s, 1, SingleQubitGate::rz(-beta));
  s = qcore::apply_gate(s, 0, SingleQubitGate::hadamard());
  return qcore::apply_gate(s, 1, SingleQubitGate::hadamard());
}

}  // namespace

void MeasurementPattern::validate(int num_qubits) const {
  std::vector<int> seen(static_cast<std::size_t>(num_qubits), 0);
  const auto mark = [&](int q, const char* what) {
    if (q < 0 || q >= num_qubits) throw std::out_of_range(std::string(what) + " qubit " + std::to_string(q) + " out of range");
    if (seen[q]++) throw std::invalid_argument("qubit " + std::to_string(q) + " appears twice in the pattern");
  };
  for (const auto& step : steps) {
    mark(step.qubit, "measured");
    if (!std::isfinite(step.alpha)) throw std::invalid_argument("measurement angle must be finite");
  }
  for (int q : readout) mark(q, "readout");
  if (std::count(seen.begin(), seen.end(), 0) != 0) {
    throw std::invalid_argument("pattern must measure or read out every qubit");
  }
  for (const auto& c : corrections) {
    const bool measured = std::any_of(steps.begin(), steps.end(), [&](const MeasurementStep& s) { return s.qubit == c.source; });
    const bool read = std::find(readout.begin(), readout.end(), c.target) != readout.end();
    if (!measured || !read) throw std::invalid_argument("correction must map a measured qubit onto a readout qubit");
    if (c.pauli != 'X' && c.pauli != 'Z') throw std::invalid_argument("corrections are X or Z");
  }
}

MeasurementPattern MeasurementPattern::identity(int num_qubits) {
  MeasurementPattern p;
  for (int q = 0; q < num_qubits; ++q) p.readout.push_back(q);
  return p;
}

double OutcomeRecord::branch_probability() const {
  double p = 1.0;
  for (const auto& [q, w] : probabilities) p *= w;
  return p;
}

PatternResult<StateVector> run_pattern(const StateVector& state, const MeasurementPattern& pattern, OutcomeSource& source) {
  return run_pattern_impl(state, pattern, source);
}

PatternResult<DensityMatrix> run_pattern(const DensityMatrix& rho, const MeasurementPattern& pattern, OutcomeSource& source) {
  return run_pattern_impl(rho, pattern, source);
}

// --- Grover ------------------------------------------------------------------

GroverMark GroverMark::parse(const std::string& bits) {
  if (bits.size() != 2 || (bits[0] != '0' && bits[0] != '1') || (bits[1] != '0' && bits[1] != '1')) {
    throw std::invalid_argument("marked element must be one of 00, 01, 10, 11 (got '" + bits + "')");
  }
  return {bits[0] - '0', bits[1] - '0'};
}

std::string GroverMark::to_string() const { return std::string{char('0' + first), char('0' + second)}; }

std::array<double, 4> grover_angles(const GroverMark& mark) {
  // Qubit 3 carries the first marked bit, qubit 2 the second; 1 and 4 are readout.
  return {kPi, mark.second ? 0.0 : kPi, mark.first ? 0.0 : kPi, kPi};
}

int grover_readout(const std::array<int, 4>& s, bool feedforward) {
  if (feedforward) return 2 * (s[2] ^ s[3]) + (s[0] ^ s[1]);
  return 2 * s[3] + s[0];
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

MeasurementPattern grover_pattern(const GroverMark& mark) {
  const auto angles = grover_angles(mark);
  MeasurementPattern p;
  // Oracle qubits first, then the readout pair.
  for (int phys : {1, 2, 0, 3}) p.steps.push_back({kBoxNodeOf[phys], angles[phys]});
  return p;
}

std::array<int, 4> physical_outcomes(const OutcomeRecord& record) {
  std::array<int, 4> s{};
  for (int phys = 0; phys < 4; ++phys) s[phys] = record.s.at(kBoxNodeOf[phys]);
  return s;
}

}  // namespace

GroverDistribution grover_run(const GroverMark& mark, bool feedforward, const DensityMatrix& input,
                              std::uint64_t trials, std::uint64_t seed, int threads) {
  if (input.num_qubits() != 4) throw std::invalid_argument("Grover search runs on four qubits");
  if (mark.first < 0 || mark.first > 1 || mark.second < 0 || mark.second > 1) {
    throw std::invalid_argument("marked element bits must be 0 or 1");
  }
  const DensityMatrix box = cluster::to_box_frame(input);
  const MeasurementPattern pattern = grover_pattern(mark);
  GroverDistribution dist{};

  if (trials == 0) {
    for (int branch = 0; branch < 16; ++branch) {
      std::vector<int> bits{(branch >> 3) & 1, (branch >> 2) & 1, (branch >> 1) & 1, branch & 1};
      auto source = OutcomeSource::forced(std::move(bits));
      try {
        const auto result = run_pattern(box, pattern, source);
        dist[grover_readout(physical_outcomes(result.record), feedforward)] += result.record.branch_probability();
      } catch (const qcore::ImpossibleOutcome&) {
      }
    }
    return dist;
  }

  const int workers = std::max(1, threads);
  std::vector<std::array<std::uint64_t, 4>> counts(static_cast<std::size_t>(workers));
  const auto work = [&](int w) {
    for (std::uint64_t i = static_cast<std::uint64_t>(w); i < trials; i += static_cast<std::uint64_t>(workers)) {
      qcore::Rng rng(derive_seed(seed, i));
      auto source = OutcomeSource::sampled(rng);
      const auto result = run_pattern(box, pattern, source);
      ++counts[w][grover_readout(physical_outcomes(result.record), feedforward)];
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& c : counts) {
    for (std::size_t k = 0; k < 4; ++k) dist[k] += static_cast<double>(c[k]);
  }
  for (double& d : dist) d /= static_cast<double>(trials);
  return dist;
}

GroverDistribution grover_run(const GroverMark& mark, bool feedforward, const StateVector& input,
                              std::uint64_t trials, std::uint64_t seed, int threads) {
  return grover_run(mark, feedforward, DensityMatrix(input), trials, seed, threads);
}

// --- Gates -------------------------------------------------------------------

std::string to_string(ClusterKind kind) { return kind == ClusterKind::Horseshoe ? "horseshoe" : "box"; }

ClusterKind parse_cluster_kind(const std::string& name) {
  if (name == "horseshoe") return ClusterKind::Horseshoe;
  if (name == "box") return ClusterKind::Box;
  throw std::invalid_argument("cluster kind must be 'horseshoe' or 'box' (got '" + name + "')");
}

StateVector horseshoe_gate(const GateOutputSpec& spec) {
  check_gate_spec(spec, ClusterKind::Horseshoe);
  StateVector s = rotate_and_hadamard(qcore::apply_cphase(plus_plus(), 0, 1), spec.alpha, spec.beta);
  s = apply_if(s, spec.s2 == 1, 0, SingleQubitGate::pauli_x());
  return apply_if(s, spec.s3 == 1, 1, SingleQubitGate::pauli_x());
}

StateVector box_gate(const GateOutputSpec& spec) {
  check_gate_spec(spec, ClusterKind::Box);
  StateVector s = rotate_and_hadamard(qcore::apply_cphase(plus_plus(), 0, 1), spec.alpha, spec.beta);
  s = qcore::apply_cphase(s, 0, 1);
  s = apply_if(s, spec.s2 == 1, 0, SingleQubitGate::pauli_x());
  s = apply_if(s, spec.s2 == 1, 1, SingleQubitGate::pauli_z());
  s = apply_if(s, spec.s3 == 1, 0, SingleQubitGate::pauli_z());
  return apply_if(s, spec.s3 == 1, 1, SingleQubitGate::pauli_x());
}

StateVector gate_output(const GateOutputSpec& spec) {
  return spec.cluster_kind == ClusterKind::Horseshoe ? horseshoe_gate(spec) : box_gate(spec);
}

MeasurementPattern gate_pattern(ClusterKind kind, double alpha, double beta, bool corrected) {
  MeasurementPattern p;
  p.steps = {{1, alpha}, {2, beta}};
  p.readout = {0, 3};
  if (corrected) {
    if (kind == ClusterKind::Horseshoe) {
      p.corrections = {{1, 0, 'X'}, {2, 3, 'X'}};
    } else {
      p.corrections = {{1, 0, 'X'}, {1, 3, 'Z'}, {2, 0, 'Z'}, {2, 3, 'X'}};
    }
  }
  return p;
}

StateVector gate_resource(ClusterKind kind) {
  return cluster::build_cluster(kind == ClusterKind::Horseshoe ? cluster::ClusterGraph::horseshoe()
                                                               : cluster::ClusterGraph::box());
}

// --- Bell discrimination -----------------------------------------------------

namespace {

StateVector discriminator_optics(const StateVector& state) {
  if (state.num_qubits() != 2) throw std::invalid_argument("Bell discrimination acts on qubits 1 and 4 only");
  // Birefringent flip on R_B: Z on the polarization when the path bit is 1.
  const StateVector flipped = qcore::apply_cphase(state, 0, 1);
  return qcore::apply_gate(flipped, 1, photonics::beam_splitter_gate());
}

}  // namespace

int bell_discriminate(const StateVector& state, OutcomeSource& source) {
  const StateVector optics = discriminator_optics(state);
  const auto pol = qcore::measure(optics, 0, 0.0, source);
  const auto port = qcore::measure_z(pol.residual, 0, source);
  return 2 * pol.outcome + port.outcome;
}

std::array<double, 4> bell_label_distribution(const StateVector& state) {
  const StateVector optics = discriminator_optics(state);
  std::array<double, 4> out{};
  for (int pol = 0; pol < 2; ++pol) {
    for (int port = 0; port < 2; ++port) {
      const Eigen::Vector2cd p = qcore::basis_vector(0.0, pol);
      const Complex a = std::conj(p(0)) * optics.amplitude(static_cast<std::size_t>(port)) +
                        std::conj(p(1)) * optics.amplitude(static_cast<std::size_t>(2 + port));
      out[2 * pol + port] = std::norm(a);
    }
  }
  return out;
}

}  // namespace oneway::mbqc
