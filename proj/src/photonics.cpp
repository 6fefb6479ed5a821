#include "oneway/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "oneway/cluster.hpp"

namespace oneway::photonics {

using qcore::Complex;
using qcore::DensityMatrix;
using qcore::StateVector;

namespace encoding {

int qubit_of(Photon photon, Dof dof) {
  if (dof == Dof::Polarization) return photon == Photon::B ? kPolarizationB : kPolarizationA;
  return photon == Photon::A ? kPathA : kPathB;
}

LogicalBit encode(const PhysicalLabel& label) {
  if (label.value != 0 && label.value != 1) throw std::invalid_argument("physical label value must be 0 or 1");
  return {qubit_of(label.photon, label.dof), label.value};
}

PhysicalLabel decode(const LogicalBit& bit) {
  if (bit.bit != 0 && bit.bit != 1) throw std::invalid_argument("logical bit must be 0 or 1");
  switch (bit.qubit) {
    case kPolarizationB: return {Photon::B, Dof::Polarization, bit.bit};
    case kPolarizationA: return {Photon::A, Dof::Polarization, bit.bit};
    case kPathA: return {Photon::A, Dof::Path, bit.bit};
    case kPathB: return {Photon::B, Dof::Path, bit.bit};
    default: throw std::out_of_range("logical qubit " + std::to_string(bit.qubit) + " has no physical label");
  }
}

std::string name(const PhysicalLabel& label) {
  std::string s = label.dof == Dof::Polarization ? (label.value == 0 ? "H" : "V") : (label.value == 0 ? "L" : "R");
  return s + (label.photon == Photon::A ? "_A" : "_B");
}

std::array<PhysicalLabel, 8> all_labels() {
  std::array<PhysicalLabel, 8> out{};
  std::size_t i = 0;
  for (Photon p : {Photon::A, Photon::B}) {
    for (Dof d : {Dof::Polarization, Dof::Path}) {
      for (int v : {0, 1}) out[i++] = {p, d, v};
    }
  }
  return out;
}

}  // namespace encoding

namespace {

// Basis index for one configuration of both photons.
std::size_t configuration_index(int pol_a, int pol_b, int path_a, int path_b) {
  const std::array<PhysicalLabel, 4> labels{{{Photon::A, Dof::Polarization, pol_a},
                                             {Photon::B, Dof::Polarization, pol_b},
                                             {Photon::A, Dof::Path, path_a},
                                             {Photon::B, Dof::Path, path_b}}};
  std::size_t index = 0;
  for (const auto& label : labels) {
    const LogicalBit b = encoding::encode(label);
    index |= static_cast<std::size_t>(b.bit) << (3 - b.qubit);
  }
  return index;
}

void check_path_qubit(int qubit) {
  if (qubit != kPathA && qubit != kPathB) {
    throw std::invalid_argument("beam splitter acts on path qubits only (got qubit " + std::to_string(qubit) + ")");
  }
}

Eigen::Vector2cd unit(int k) {
  Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
  v(k) = 1.0;
  return v;
}

// Path state selected by detection behind the apparatus.
Eigen::Vector2cd path_vector(const ApparatusSetting& setting, int bit) {
  if (setting.kind != ApparatusKind::PathBAlpha) return unit(bit);
  // Phase shifter e^{-i alpha} on the R input, then the beam splitter.
  Eigen::Matrix2cd phase = Eigen::Matrix2cd::Identity();
  phase(1, 1) = std::polar(1.0, -*setting.alpha);
  const Eigen::Matrix2cd u = beam_splitter_gate().matrix() * phase;
  return u.adjoint() * unit(bit);
}

Eigen::Vector2cd polarization_vector(PolarizationBasis basis, int bit) {
  if (basis == PolarizationBasis::HV) return unit(bit);
  return qcore::basis_vector(0.0, bit);
}

// State index (2 * path + pol) within one photon's 4-dim space.
std::size_t photon_index(std::size_t basis_index, Photon photon) {
  const int path_q = photon == Photon::A ? kPathA : kPathB;
  const int pol_q = photon == Photon::A ? kPolarizationA : kPolarizationB;
  return 2 * static_cast<std::size_t>(qcore::qubit_bit(basis_index, path_q, 4)) +
         static_cast<std::size_t>(qcore::qubit_bit(basis_index, pol_q, 4));
}

std::size_t detector_index(DetectorPair pair) {
  // (photon A port, photon B port), H polarisation on both.
  int port_a = 0, port_b = 0;
  switch (pair) {
    case DetectorPair::D1D2: port_a = 0; port_b = 0; break;
    case DetectorPair::D1D4: port_a = 0; port_b = 1; break;
    case DetectorPair::D3D2: port_a = 1; port_b = 0; break;
    case DetectorPair::D3D4: port_a = 1; port_b = 1; break;
  }
  return configuration_index(0, 0, port_a, port_b);
}

// Witness terms of the channel output are affine in each noise parameter, so the
// eight corner evaluations determine them exactly everywhere in [0, 1]^3.
class NoiseResponse {
 public:
  NoiseResponse() {
    for (int corner = 0; corner < 8; ++corner) {
      const NoiseModel m{static_cast<double>((corner >> 2) & 1), static_cast<double>((corner >> 1) & 1),
                         static_cast<double>(corner & 1)};
      corners_[corner] = predicted_terms(m);
    }
  }

  std::array<double, 6> terms(double la, double lb, double p) const {
    std::array<double, 6> out{};
    for (int corner = 0; corner < 8; ++corner) {
      const double w = ((corner >> 2) & 1 ? la : 1 - la) * ((corner >> 1) & 1 ? lb : 1 - lb) * (corner & 1 ? p : 1 - p);
      for (std::size_t t = 0; t < 6; ++t) out[t] += w * corners_[corner][t];
    }
    return out;
  }

 private:
  std::array<std::array<double, 6>, 8> corners_{};
};

double squared_residual(const std::array<double, 6>& predicted, const std::array<double, 6>& targets) {
  double r = 0.0;
  for (std::size_t t = 0; t < 6; ++t) r += (predicted[t] - targets[t]) * (predicted[t] - targets[t]);
  return r;
}

}  // namespace

StateVector source_state(const SourceParams& params) {
  qcore::Vector v = qcore::Vector::Zero(16);
  const Complex phase = std::polar(1.0, params.theta);
  // Forward pair on LL: |HH> + |VV>.
  v(configuration_index(0, 0, 0, 0)) += 0.5;
  v(configuration_index(1, 1, 0, 0)) += 0.5;
  // Backward pair on RR: e^{i theta}(|HH> - |VV>).
  v(configuration_index(0, 0, 1, 1)) += 0.5 * phase;
  v(configuration_index(1, 1, 1, 1)) -= 0.5 * phase;
  return StateVector(std::move(v));
}

qcore::SingleQubitGate beam_splitter_gate() { return qcore::SingleQubitGate::hadamard(); }

StateVector beam_splitter(const StateVector& state, int path_qubit) {
  check_path_qubit(path_qubit);
  return qcore::apply_gate(state, path_qubit, beam_splitter_gate());
}

DensityMatrix beam_splitter(const DensityMatrix& rho, int path_qubit) {
  check_path_qubit(path_qubit);
  return qcore::apply_gate(rho, path_qubit, beam_splitter_gate());
}

void NoiseModel::validate() const {
  const auto check = [](double v, const char* field) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(field) + " must lie in [0, 1]");
  };
  check(path_dephasing_a, "path_dephasing_a");
  check(path_dephasing_b, "path_dephasing_b");
  check(white_noise, "white_noise");
}

DensityMatrix apply_noise(const StateVector& ideal, const NoiseModel& model) {
  model.validate();
  if (ideal.num_qubits() != 4) throw std::invalid_argument("noise model acts on the four-qubit source state");
  DensityMatrix rho(ideal);
  rho = qcore::dephase(rho, kPathA, model.path_dephasing_a);
  rho = qcore::dephase(rho, kPathB, model.path_dephasing_b);
  return qcore::mix_white_noise(rho, model.white_noise);
}

std::array<double, 6> predicted_terms(const NoiseModel& model) {
  const DensityMatrix rho = apply_noise(cluster::c4_state(), model);
  std::array<double, 6> out{};
  for (std::size_t t = 0; t < 6; ++t) out[t] = qcore::expectation(rho, qcore::PauliString::parse(cluster::kWitnessTerms[t]));
  return out;
}

NoiseFit fit_noise(const std::array<double, 6>& targets) {
  static const NoiseResponse response;
  constexpr int kGrid = 101;

  std::array<double, 3> best{0.0, 0.0, 0.0};
  double best_residual = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      for (int k = 0; k < kGrid; ++k) {
        const double la = i / 100.0, lb = j / 100.0, p = k / 100.0;
        const double r = squared_residual(response.terms(la, lb, p), targets);
        if (r < best_residual) {
          best_residual = r;
          best = {la, lb, p};
        }
      }
    }
  }

  const auto residual_at = [&](const std::array<double, 3>& x) {
    return squared_residual(response.terms(x[0], x[1], x[2]), targets);
  };
  for (double step : {5e-3, 2.5e-3, 1e-3, 5e-4, 2.5e-4, 1e-4}) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t axis = 0; axis < 3; ++axis) {
        for (double dir : {-1.0, 1.0}) {
          std::array<double, 3> trial = best;
          trial[axis] = std::clamp(trial[axis] + dir * step, 0.0, 1.0);
          const double r = residual_at(trial);
          if (r < best_residual) {
            best_residual = r;
            best = trial;
            improved = true;
          }
        }
      }
    }
  }

  // The witness terms see the two path dephasings only through their product;
  // split it evenly when that costs nothing.
  const double coherence = (1.0 - best[0]) * (1.0 - best[1]);
  const double even = 1.0 - std::sqrt(coherence);
  const std::array<double, 3> symmetric{even, even, best[2]};
  const double r_sym = residual_at(symmetric);
  if (r_sym <= best_residual + 1e-15) {
    best = symmetric;
    best_residual = r_sym;
  }
  return {NoiseModel{best[0], best[1], best[2]}, best_residual};
}

std::string to_string(DetectorPair pair) {
  switch (pair) {
    case DetectorPair::D1D2: return "D1-D2";
    case DetectorPair::D1D4: return "D1-D4";
    case DetectorPair::D3D2: return "D3-D2";
    case DetectorPair::D3D4: return "D3-D4";
  }
  return "?";
}

std::array<DetectorPair, 4> all_detector_pairs() {
  return {DetectorPair::D1D2, DetectorPair::D1D4, DetectorPair::D3D2, DetectorPair::D3D4};
}

double coincidence_probability(const DensityMatrix& rho, DetectorPair pair) {
  if (rho.num_qubits() != 4) throw std::invalid_argument("coincidences need the four-qubit state");
  const DensityMatrix out = beam_splitter(beam_splitter(rho, kPathA), kPathB);
  const std::size_t b = detector_index(pair);
  return std::max(0.0, out.matrix()(b, b).real());
}

std::vector<FringePoint> fringe_scan(const NoiseModel& model, DetectorPair pair, int samples) {
  if (samples < 8) throw std::invalid_argument("fringe scan needs at least 8 samples");
  model.validate();
  std::vector<FringePoint> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / samples;
    const DensityMatrix rho = apply_noise(source_state({theta}), model);
    out.push_back({theta, coincidence_probability(rho, pair)});
  }
  return out;
}

double visibility_scan(const NoiseModel& model, DetectorPair pair, int samples) {
  const auto fringe = fringe_scan(model, pair, samples);
  const auto [lo, hi] = std::minmax_element(fringe.begin(), fringe.end(),
                                            [](const FringePoint& a, const FringePoint& b) { return a.probability < b.probability; });
  const double sum = hi->probability + lo->probability;
  if (sum <= 0.0) return 0.0;
  return (hi->probability - lo->probability) / sum;
}

void ApparatusSetting::validate() const {
  switch (kind) {
    case ApparatusKind::PathZ:
      if (alpha) throw std::invalid_argument("apparatus (i) takes no phase-shifter angle");
      break;
    case ApparatusKind::PathBAlpha:
      if (!alpha || !std::isfinite(*alpha)) throw std::invalid_argument("apparatus (ii) needs a finite alpha");
      break;
    case ApparatusKind::PathAndPolZ:
      if (alpha) throw std::invalid_argument("apparatus (iii) takes no phase-shifter angle");
      if (polarization != PolarizationBasis::HV) throw std::invalid_argument("apparatus (iii) analyses H/V only");
      break;
  }
}

std::vector<LabeledProjector> apparatus_projectors(const ApparatusSetting& setting) {
  setting.validate();
  const bool ported = setting.kind == ApparatusKind::PathBAlpha;
  const std::array<const char*, 2> path_names = ported ? std::array<const char*, 2>{"R'", "L'"}
                                                       : std::array<const char*, 2>{"L", "R"};
  const std::array<const char*, 2> pol_names = setting.polarization == PolarizationBasis::HV
                                                   ? std::array<const char*, 2>{"H", "V"}
                                                   : std::array<const char*, 2>{"+", "-"};
  std::vector<LabeledProjector> out;
  for (int path = 0; path < 2; ++path) {
    for (int pol = 0; pol < 2; ++pol) {
      Eigen::Vector4cd v;
      const Eigen::Vector2cd pv = path_vector(setting, path);
      const Eigen::Vector2cd qv = polarization_vector(setting.polarization, pol);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) v(2 * a + b) = pv(a) * qv(b);
      }
      out.push_back({std::string(path_names[path]) + "," + pol_names[pol], path, pol, v * v.adjoint()});
    }
  }
  return out;
}

std::array<double, 16> joint_distribution(const DensityMatrix& rho, const ApparatusSetting& photon_a,
                                          const ApparatusSetting& photon_b) {
  if (rho.num_qubits() != 4) throw std::invalid_argument("joint distribution needs the four-qubit state");
  const auto proj_a = apparatus_projectors(photon_a);
  const auto proj_b = apparatus_projectors(photon_b);
  std::array<double, 16> out{};
  for (const auto& pa : proj_a) {
    for (const auto& pb : proj_b) {
      Complex acc = 0.0;
      for (std::size_t r = 0; r < 16; ++r) {
        for (std::size_t c = 0; c < 16; ++c) {
          const Complex w = pa.projector(photon_index(r, Photon::A), photon_index(c, Photon::A)) *
                            pb.projector(photon_index(r, Photon::B), photon_index(c, Photon::B));
          if (w != Complex(0.0)) acc += w * rho.matrix()(c, r);
        }
      }
      const std::size_t outcome = configuration_index(pa.pol_bit, pb.pol_bit, pa.path_bit, pb.path_bit);
      out[outcome] = std::max(0.0, acc.real());
    }
  }
  return out;
}

}  // namespace oneway::photonics
