#pragma once

// Measurement patterns with feed-forward on four-qubit cluster states:
// Grover search over four entries, the horseshoe and box two-qubit gates and
// Bell-state discrimination of the gate output.
//
// Qubit numbers in comments (1..4) are the physical |C4> labels; code uses
// indices 0..3.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oneway/qcore.hpp"

namespace oneway::mbqc {

struct MeasurementStep {
  int qubit;
  double alpha;
};

/// Pauli `pauli` on readout qubit `target` when the outcome of `source` is 1.
struct PauliCorrection {
  int source;
  int target;
  char pauli;  ///< 'X' or 'Z'
};

struct MeasurementPattern {
  std::vector<MeasurementStep> steps;
  std::vector<int> readout;  ///< residual qubits, in this order
  std::vector<PauliCorrection> corrections;

  /// Steps and readout must partition the qubits; corrections must go from a
  /// measured qubit to a readout qubit.
  void validate(int num_qubits) const;

  static MeasurementPattern identity(int num_qubits);
};

struct OutcomeRecord {
  std::map<int, int> s;
  std::map<int, double> probabilities;  ///< conditional Born weight of each step
  double branch_probability() const;
};

template <class State>
struct PatternResult {
  OutcomeRecord record;
  State residual;
};

PatternResult<qcore::StateVector> run_pattern(const qcore::StateVector& state, const MeasurementPattern& pattern,
                                              qcore::OutcomeSource& source);
PatternResult<qcore::DensityMatrix> run_pattern(const qcore::DensityMatrix& rho, const MeasurementPattern& pattern,
                                                qcore::OutcomeSource& source);

// --- Grover ------------------------------------------------------------------

/// Marked entry "ab"; the first bit is read from s3 ^ s4, the second from s1 ^ s2.
struct GroverMark {
  int first = 0;
  int second = 0;

  static GroverMark parse(const std::string& bits);
  std::string to_string() const;
  int index() const { return 2 * first + second; }
};

/// Readout distribution indexed by 2 * first + second.
using GroverDistribution = std::array<double, 4>;

/// Oracle and readout angles per physical qubit, applied in the box-cluster frame.
/// Marks are encoded with B(pi) for a 0 bit and B(0) for a 1 bit, i.e. B(pi) with the
/// outcome relabelled.
std::array<double, 4> grover_angles(const GroverMark& mark);

/// Two output bits from the physical-qubit outcomes s[0..3]:
/// with feed-forward {s3 ^ s4, s1 ^ s2}, without it the raw readout {s4, s1}.
int grover_readout(const std::array<int, 4>& s, bool feedforward);

/// Runs the search on a lab-frame |C4>-like input. trials = 0 gives the exact
/// distribution (all branches enumerated); trials > 0 samples, giving trial i its own
/// RNG seeded with derive_seed(seed, i). `threads` only partitions the trials.
GroverDistribution grover_run(const GroverMark& mark, bool feedforward, const qcore::DensityMatrix& input,
                              std::uint64_t trials, std::uint64_t seed = 0, int threads = 1);
GroverDistribution grover_run(const GroverMark& mark, bool feedforward, const qcore::StateVector& input,
                              std::uint64_t trials, std::uint64_t seed = 0, int threads = 1);

/// splitmix64 of root + golden-ratio increment * (index + 1).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

// --- Gates -------------------------------------------------------------------

enum class ClusterKind { Horseshoe, Box };

std::string to_string(ClusterKind kind);
ClusterKind parse_cluster_kind(const std::string& name);

struct GateOutputSpec {
  ClusterKind cluster_kind = ClusterKind::Horseshoe;
  double alpha = 0.0;
  double beta = 0.0;
  int s2 = 0;
  int s3 = 0;
};

/// (X^{s2} x X^{s3})(H x H)(Rz(-alpha) x Rz(-beta)) CPhase |++> on qubits 1, 4.
qcore::StateVector horseshoe_gate(const GateOutputSpec& spec);
/// (Z x X)^{s3} (X x Z)^{s2} CPhase (H x H)(Rz(-alpha) x Rz(-beta)) CPhase |++> on qubits 1, 4.
qcore::StateVector box_gate(const GateOutputSpec& spec);
/// Dispatches on spec.cluster_kind.
qcore::StateVector gate_output(const GateOutputSpec& spec);

/// Measures qubit 2 in B(alpha) and qubit 3 in B(beta); readout qubits 1, 4.
/// With `corrected`, the byproduct Paulis of the matching formula are undone.
MeasurementPattern gate_pattern(ClusterKind kind, double alpha, double beta, bool corrected = false);

/// The graph state the pattern runs on (build_cluster of the box or horseshoe graph).
qcore::StateVector gate_resource(ClusterKind kind);

// --- Bell discrimination -----------------------------------------------------

/// Labels "++", "+-", "-+", "--" for (qubit 1, qubit 4) after the discriminator.
inline constexpr std::array<const char*, 4> kBellLabels{"++", "+-", "-+", "--"};

/// Polarization flip |+> <-> |-> on photon-B paths R (a CPhase between qubits 1 and 4),
/// beam splitter on qubit 4, then polarization in +/- and the output port.
/// Returns the index into kBellLabels.
int bell_discriminate(const qcore::StateVector& state, qcore::OutcomeSource& source);
std::array<double, 4> bell_label_distribution(const qcore::StateVector& state);

}  // namespace oneway::mbqc
