#pragma once

// Two-photon polarization/path source, logical encoding, measurement
// apparatuses and a three-parameter noise model.
//
// Encoding (qubit index, value):
//   photon B polarization -> qubit 0   H = 0, V = 1
//   photon A polarization -> qubit 1   H = 0, V = 1
//   photon A path         -> qubit 2   L = 0, R = 1
//   photon B path         -> qubit 3   L = 0, R = 1
//
// Beam splitter ports: R' = 0, L' = 1, so |L> -> (|R'> + |L'>)/sqrt2 and
// |R> -> (|R'> - |L'>)/sqrt2 is exactly the Hadamard matrix.
//
// Detectors used in the fringe scan, all behind the H output of a PBS:
//   D1 = (A, R'), D3 = (A, L'), D2 = (B, R'), D4 = (B, L').

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "oneway/qcore.hpp"

namespace oneway::photonics {

enum class Photon { A, B };
enum class Dof { Polarization, Path };

/// value 0 is H (polarization) or L (path); 1 is V or R.
struct PhysicalLabel {
  Photon photon;
  Dof dof;
  int value;
  bool operator==(const PhysicalLabel&) const = default;
};

struct LogicalBit {
  int qubit;
  int bit;
  bool operator==(const LogicalBit&) const = default;
};

inline constexpr int kPolarizationB = 0;
inline constexpr int kPolarizationA = 1;
inline constexpr int kPathA = 2;
inline constexpr int kPathB = 3;

namespace encoding {

int qubit_of(Photon photon, Dof dof);
LogicalBit encode(const PhysicalLabel& label);
PhysicalLabel decode(const LogicalBit& bit);
/// "H_A", "R_B" and so on.
std::string name(const PhysicalLabel& label);
std::array<PhysicalLabel, 8> all_labels();

}  // namespace encoding

struct SourceParams {
  double theta = 0.0;  ///< phase of the backward (RR) pair, modulo 2 pi
};

/// ((|HH>+|VV>)|LL> + e^{i theta}(|HH>-|VV>)|RR>) / 2 through the encoding map.
qcore::StateVector source_state(const SourceParams& params);

qcore::SingleQubitGate beam_splitter_gate();
/// Beam splitter on one photon's path; throws unless path_qubit is kPathA or kPathB.
qcore::StateVector beam_splitter(const qcore::StateVector& state, int path_qubit);
qcore::DensityMatrix beam_splitter(const qcore::DensityMatrix& rho, int path_qubit);

struct NoiseModel {
  double path_dephasing_a = 0.0;
  double path_dephasing_b = 0.0;
  double white_noise = 0.0;

  /// Throws std::invalid_argument naming the first parameter outside [0, 1].
  void validate() const;
  bool operator==(const NoiseModel&) const = default;
};

/// Dephases both path qubits, then mixes in white noise.
qcore::DensityMatrix apply_noise(const qcore::StateVector& ideal, const NoiseModel& model);

struct NoiseFit {
  NoiseModel model;
  double residual;  ///< sum of squared deviations over the six witness terms
};

/// Least-squares fit of the noise model to the six witness-term values of |C4>
/// (order of cluster::kWitnessTerms): 101^3 grid, then coordinate descent down to 1e-4.
NoiseFit fit_noise(const std::array<double, 6>& targets);

/// Witness-term expectations of apply_noise(|C4>, model).
std::array<double, 6> predicted_terms(const NoiseModel& model);

enum class DetectorPair { D1D2, D1D4, D3D2, D3D4 };

std::string to_string(DetectorPair pair);
std::array<DetectorPair, 4> all_detector_pairs();

struct FringePoint {
  double theta;
  double probability;
};

/// Coincidence probability of the pair for the given (post-source) state,
/// with both path qubits sent through their beam splitters.
double coincidence_probability(const qcore::DensityMatrix& rho, DetectorPair pair);

/// theta sampled uniformly on [0, 2 pi); throws for fewer than 8 samples.
std::vector<FringePoint> fringe_scan(const NoiseModel& model, DetectorPair pair, int samples);
/// (max - min) / (max + min) of the fringe.
double visibility_scan(const NoiseModel& model, DetectorPair pair, int samples);

enum class ApparatusKind {
  PathZ,        ///< (i): paths leave without interfering
  PathBAlpha,   ///< (ii): phase shifter alpha on R, then the beam splitter
  PathAndPolZ,  ///< (iii): PBS interference, path Z and polarization H/V at once
};

enum class PolarizationBasis { HV, PlusMinus };

struct ApparatusSetting {
  ApparatusKind kind = ApparatusKind::PathZ;
  std::optional<double> alpha;
  PolarizationBasis polarization = PolarizationBasis::HV;

  void validate() const;
};

/// Rank-1 projector on one photon's (path x polarization) space; index = 2 * path + pol.
struct LabeledProjector {
  std::string label;
  int path_bit;  ///< 0 = L / R' / alpha+, 1 = R / L' / alpha-
  int pol_bit;   ///< 0 = H or +, 1 = V or -
  Eigen::Matrix4cd projector;
};

std::vector<LabeledProjector> apparatus_projectors(const ApparatusSetting& setting);

/// Joint outcome distribution with photon A and B analysed by the given settings.
/// Outcome index bits follow qubit order: (pol B, pol A, path A, path B), MSB first.
std::array<double, 16> joint_distribution(const qcore::DensityMatrix& rho, const ApparatusSetting& photon_a,
                                          const ApparatusSetting& photon_b);

}  // namespace oneway::photonics
