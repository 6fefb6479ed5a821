#include "oneway/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "oneway/cluster.hpp"

namespace oneway::analysis {

using photonics::ApparatusKind;
using photonics::ApparatusSetting;
using photonics::PolarizationBasis;
using qcore::DensityMatrix;
using qcore::StateVector;

namespace {

// Terms measured in each setting, as indices into cluster::kWitnessTerms.
constexpr std::array<std::size_t, 3> kXXZZTerms{0, 1, 2};
constexpr std::array<std::size_t, 3> kZZXXTerms{3, 4, 5};

// Eigenvalue sign of a witness term on a joint outcome (qubit-ordered bits).
int term_sign(std::size_t term, std::size_t outcome) {
  const std::string_view word = cluster::kWitnessTerms[term];
  int parity = 0;
  for (int q = 0; q < 4; ++q) {
    if (word[q] != 'I') parity ^= qcore::qubit_bit(outcome, q, 4);
  }
  return parity ? -1 : 1;
}

const CountRecord& find_record(std::span<const CountRecord> records, WitnessSetting setting) {
  const std::string name = to_string(setting);
  for (const auto& r : records) {
    if (r.setting == name) {
      if (r.duration <= 0.0) throw std::invalid_argument("count record for " + name + " has no duration");
      if (r.counts.size() != 16) throw std::invalid_argument("count record for " + name + " needs 16 outcomes");
      if (r.total() == 0) throw std::invalid_argument("count record for " + name + " is empty");
      return r;
    }
  }
  throw std::invalid_argument("no count record for setting " + name);
}

struct SettingEstimate {
  std::array<double, 3> values{};
  std::array<double, 3> variances{};
  double w_variance = 0.0;
};

SettingEstimate estimate_setting(const std::vector<double>& counts, const std::array<std::size_t, 3>& terms) {
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  SettingEstimate est;
  for (std::size_t k = 0; k < 3; ++k) {
    double acc = 0.0;
    for (std::size_t o = 0; o < counts.size(); ++o) acc += term_sign(terms[k], o) * counts[o];
    est.values[k] = acc / n;
  }
  // Var f = sum_o (df/dn_o)^2 n_o, with d(term)/dn_o = (sign - term) / N.
  for (std::size_t o = 0; o < counts.size(); ++o) {
    double dw = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double d = (term_sign(terms[k], o) - est.values[k]) / n;
      est.variances[k] += d * d * counts[o];
      dw += -0.5 * d;
    }
    est.w_variance += dw * dw * counts[o];
  }
  return est;
}

std::vector<double> as_doubles(const std::vector<std::uint64_t>& counts) {
  return {counts.begin(), counts.end()};
}

WitnessReport combine(const SettingEstimate& xxzz, const SettingEstimate& zzxx) {
  std::array<double, 6> values{};
  for (std::size_t k = 0; k < 3; ++k) {
    values[kXXZZTerms[k]] = xxzz.values[k];
    values[kZZXXTerms[k]] = zzxx.values[k];
  }
  WitnessReport report = witness_from_terms(values);
  for (std::size_t k = 0; k < 3; ++k) {
    report.terms[kXXZZTerms[k]].standard_error = std::sqrt(xxzz.variances[k]);
    report.terms[kZZXXTerms[k]].standard_error = std::sqrt(zzxx.variances[k]);
  }
  report.w_stderr = std::sqrt(xxzz.w_variance + zzxx.w_variance);
  report.bound_stderr = 0.5 * report.w_stderr;
  return report;
}

}  // namespace

WitnessReport witness_from_terms(const std::array<double, 6>& values) {
  WitnessReport report;
  double sum = 0.0;
  for (std::size_t t = 0; t < 6; ++t) {
    report.terms[t] = {cluster::kWitnessTerms[t], values[t], 0.0};
    sum += values[t];
  }
  report.w_value = (4.0 - sum) / 2.0;
  report.fidelity_lower_bound = 0.5 - 0.5 * report.w_value;
  return report;
}

WitnessReport witness_value(const DensityMatrix& rho) {
  if (rho.num_qubits() != 4) throw std::invalid_argument("the witness acts on four qubits");
  std::array<double, 6> values{};
  for (std::size_t t = 0; t < 6; ++t) values[t] = qcore::expectation(rho, qcore::PauliString::parse(cluster::kWitnessTerms[t]));
  return witness_from_terms(values);
}

WitnessReport witness_value(const StateVector& state) {
  if (state.num_qubits() != 4) throw std::invalid_argument("the witness acts on four qubits");
  std::array<double, 6> values{};
  for (std::size_t t = 0; t < 6; ++t) values[t] = qcore::expectation(state, qcore::PauliString::parse(cluster::kWitnessTerms[t]));
  return witness_from_terms(values);
}

std::string to_string(WitnessSetting setting) { return setting == WitnessSetting::XXZZ ? "XXZZ" : "ZZXX"; }

WitnessSetting parse_witness_setting(const std::string& name) {
  if (name == "XXZZ") return WitnessSetting::XXZZ;
  if (name == "ZZXX") return WitnessSetting::ZZXX;
  throw std::invalid_argument("unknown witness setting '" + name + "'");
}

std::pair<ApparatusSetting, ApparatusSetting> apparatus_for(WitnessSetting setting) {
  ApparatusSetting s;
  if (setting == WitnessSetting::XXZZ) {
    s = {ApparatusKind::PathZ, std::nullopt, PolarizationBasis::PlusMinus};
  } else {
    s = {ApparatusKind::PathBAlpha, 0.0, PolarizationBasis::HV};
  }
  return {s, s};
}

std::array<double, 16> setting_distribution(const DensityMatrix& rho, WitnessSetting setting) {
  const auto [a, b] = apparatus_for(setting);
  return photonics::joint_distribution(rho, a, b);
}

std::uint64_t CountRecord::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

CountRecord simulate_counts(std::span<const double> probabilities, double rate, double duration, std::uint64_t seed,
                            std::string setting) {
  if (probabilities.empty()) throw std::invalid_argument("empty outcome distribution");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw std::invalid_argument("outcome distribution has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("outcome distribution does not sum to 1");
  if (!(rate > 0.0) || !(duration > 0.0)) throw std::invalid_argument("rate and duration must be positive");

  qcore::Rng rng(seed);
  std::poisson_distribution<std::uint64_t> poisson(rate * duration);
  std::uint64_t remaining = poisson(rng);

  CountRecord record{std::move(setting), std::vector<std::uint64_t>(probabilities.size(), 0), duration, rate};
  double mass = 1.0;
  for (std::size_t o = 0; o + 1 < probabilities.size() && remaining > 0; ++o) {
    const double p = mass > 0.0 ? std::clamp(probabilities[o] / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::uint64_t> binomial(remaining, p);
    record.counts[o] = binomial(rng);
    remaining -= record.counts[o];
    mass -= probabilities[o];
  }
  record.counts.back() += remaining;
  return record;
}

WitnessReport witness_from_counts(std::span<const CountRecord> records) {
  const CountRecord& xxzz = find_record(records, WitnessSetting::XXZZ);
  const CountRecord& zzxx = find_record(records, WitnessSetting::ZZXX);
  return combine(estimate_setting(as_doubles(xxzz.counts), kXXZZTerms),
                 estimate_setting(as_doubles(zzxx.counts), kZZXXTerms));
}

double witness_bootstrap_stderr(std::span<const CountRecord> records, int resamples, std::uint64_t seed) {
  if (resamples < 2) throw std::invalid_argument("bootstrap needs at least two resamples");
  const CountRecord& xxzz = find_record(records, WitnessSetting::XXZZ);
  const CountRecord& zzxx = find_record(records, WitnessSetting::ZZXX);
  const auto redraw = [](const std::vector<std::uint64_t>& counts, qcore::Rng& rng) {
    std::vector<double> out(counts.size());
    for (std::size_t o = 0; o < counts.size(); ++o) {
      if (counts[o] == 0) continue;
      std::poisson_distribution<std::uint64_t> poisson(static_cast<double>(counts[o]));
      out[o] = static_cast<double>(poisson(rng));
    }
    return out;
  };
  double mean = 0.0, m2 = 0.0;
  for (int r = 0; r < resamples; ++r) {
    qcore::Rng rng(mbqc::derive_seed(seed, static_cast<std::uint64_t>(r)));
    const auto a = redraw(xxzz.counts, rng);
    const auto b = redraw(zzxx.counts, rng);
    const double w = combine(estimate_setting(a, kXXZZTerms), estimate_setting(b, kZZXXTerms)).w_value;
    const double delta = w - mean;
    mean += delta / (r + 1);
    m2 += delta * (w - mean);
  }
  return std::sqrt(m2 / (resamples - 1));
}

std::vector<CountRecord> simulate_witness_counts(const DensityMatrix& rho, double rate, double duration,
                                                 std::uint64_t seed) {
  std::vector<CountRecord> out;
  for (WitnessSetting s : {WitnessSetting::XXZZ, WitnessSetting::ZZXX}) {
    const auto dist = setting_distribution(rho, s);
    // Re-normalise away rounding from the clamped projector weights.
    std::array<double, 16> p = dist;
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= total;
    out.push_back(simulate_counts(p, rate, duration, mbqc::derive_seed(seed, static_cast<std::uint64_t>(s)), to_string(s)));
  }
  return out;
}

std::array<BranchFidelity, 4> gate_fidelity_report(mbqc::ClusterKind kind, double alpha, double beta,
                                                   const photonics::NoiseModel& noise) {
  const DensityMatrix lab = photonics::apply_noise(cluster::c4_state(), noise);
  const DensityMatrix graph = kind == mbqc::ClusterKind::Horseshoe ? cluster::to_horseshoe_frame(lab)
                                                                   : cluster::to_box_frame(lab);
  const mbqc::MeasurementPattern pattern = mbqc::gate_pattern(kind, alpha, beta);
  std::array<BranchFidelity, 4> out{};
  for (int s2 = 0; s2 < 2; ++s2) {
    for (int s3 = 0; s3 < 2; ++s3) {
      const StateVector target = mbqc::gate_output({kind, alpha, beta, s2, s3});
      auto source = qcore::OutcomeSource::forced({s2, s3});
      BranchFidelity& b = out[2 * s2 + s3];
      b = {s2, s3, 0.0, 0.0};
      try {
        const auto result = mbqc::run_pattern(graph, pattern, source);
        b.probability = result.record.branch_probability();
        b.fidelity = qcore::fidelity(result.residual, target);
      } catch (const qcore::ImpossibleOutcome&) {
      }
    }
  }
  return out;
}

GroverReport grover_report(const photonics::NoiseModel& noise, bool feedforward, const mbqc::GroverMark& mark,
                           double rate, double duration, std::uint64_t seed, double theta) {
  const DensityMatrix lab = photonics::apply_noise(photonics::source_state({theta}), noise);
  GroverReport report;
  report.mark = mark;
  report.feedforward = feedforward;
  report.distribution = mbqc::grover_run(mark, feedforward, lab, 0);
  report.success = report.distribution[mark.index()];

  std::array<double, 4> p = report.distribution;
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  const CountRecord record = simulate_counts(p, rate, duration, seed, "grover");
  report.counts = record.counts;
  const double n = static_cast<double>(record.total());
  if (n > 0) {
    const double hit = static_cast<double>(record.counts[mark.index()]) / n;
    // Delta method on Poisson counts: Var(n_hit / N) = hit (1 - hit) / N.
    report.success_stderr = std::sqrt(hit * (1.0 - hit) / n);
  }
  return report;
}

}  // namespace oneway::analysis
