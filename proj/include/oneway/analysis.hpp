#pragma once

// Witness evaluation, fidelity bounds, gate and Grover reports, and Poisson
// counting statistics for finite-duration runs.
//
// Witness settings and the terms each one yields (outcome bits in qubit order):
//   XXZZ: polarizations in +/-, paths in L/R   -> XXIZ, XXZI, IIZZ
//   ZZXX: polarizations in H/V, paths behind BS -> IZXX, ZIXX, ZZII
// A term's estimate is sum_o (-1)^{bits of o on the term's support} n_o / N.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "oneway/mbqc.hpp"
#include "oneway/photonics.hpp"
#include "oneway/qcore.hpp"

namespace oneway::analysis {

struct TermEstimate {
  std::string name;
  double value = 0.0;
  double standard_error = 0.0;
};

struct WitnessReport {
  std::array<TermEstimate, 6> terms;
  double w_value = 0.0;
  double w_stderr = 0.0;
  double fidelity_lower_bound = 0.0;
  double bound_stderr = 0.0;
};

/// Builds a report from six term values (zero errors): W = (4 - sum) / 2, F >= 1/2 - W/2.
WitnessReport witness_from_terms(const std::array<double, 6>& values);

WitnessReport witness_value(const qcore::DensityMatrix& rho);
WitnessReport witness_value(const qcore::StateVector& state);

enum class WitnessSetting { XXZZ, ZZXX };

std::string to_string(WitnessSetting setting);
WitnessSetting parse_witness_setting(const std::string& name);

/// Photon A and photon B apparatus settings realising a witness setting.
std::pair<photonics::ApparatusSetting, photonics::ApparatusSetting> apparatus_for(WitnessSetting setting);

/// Exact 16-outcome distribution of a setting.
std::array<double, 16> setting_distribution(const qcore::DensityMatrix& rho, WitnessSetting setting);

struct CountRecord {
  std::string setting;                 ///< "XXZZ", "ZZXX", or free-form for other tables
  std::vector<std::uint64_t> counts;   ///< indexed by joint outcome
  double duration = 0.0;               ///< seconds
  double rate = 0.0;                   ///< events per second

  std::uint64_t total() const;
};

/// Poisson total with mean rate * duration, split multinomially. Deterministic in seed.
/// Throws if the distribution has a negative entry or does not sum to 1 within 1e-9.
CountRecord simulate_counts(std::span<const double> probabilities, double rate, double duration, std::uint64_t seed,
                            std::string setting = {});

/// Six-term witness estimate from one record per setting, with first-order
/// (delta-method) Poisson errors. Throws when a setting is missing or empty.
WitnessReport witness_from_counts(std::span<const CountRecord> records);

/// Parametric bootstrap of w_stderr: each count redrawn as Poisson(n_o).
double witness_bootstrap_stderr(std::span<const CountRecord> records, int resamples, std::uint64_t seed);

/// Both setting records for one state, seeded per setting from `seed`.
std::vector<CountRecord> simulate_witness_counts(const qcore::DensityMatrix& rho, double rate, double duration,
                                                 std::uint64_t seed);

struct BranchFidelity {
  int s2;
  int s3;
  double probability;  ///< Born weight of the branch
  double fidelity;     ///< against the branch's ideal output
};

/// Noisy lab state mapped into the graph frame, qubits 2 and 3 measured with
/// forced outcomes, output on 1, 4 compared with the closed-form target.
std::array<BranchFidelity, 4> gate_fidelity_report(mbqc::ClusterKind kind, double alpha, double beta,
                                                   const photonics::NoiseModel& noise);

struct GroverReport {
  mbqc::GroverMark mark;
  bool feedforward = true;
  mbqc::GroverDistribution distribution{};
  double success = 0.0;
  double success_stderr = 0.0;  ///< from simulated counts at `rate` over `duration`
  std::vector<std::uint64_t> counts;
};

GroverReport grover_report(const photonics::NoiseModel& noise, bool feedforward,
                           const mbqc::GroverMark& mark = {}, double rate = 1.2e4, double duration = 1.0,
                           std::uint64_t seed = 1, double theta = 0.0);

}  // namespace oneway::analysis
