#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oneway/analysis.hpp"
#include "oneway/cluster.hpp"
#include "oneway/reference_data.hpp"
#include "oracle.hpp"

using namespace oneway;
using namespace oneway::analysis;
using qcore::kTol;

namespace {

const photonics::NoiseModel& fitted() {
  static const auto fit = photonics::fit_noise(reference::kWitnessTermValues);
  return fit.model;
}

qcore::DensityMatrix fitted_state() { return photonics::apply_noise(cluster::c4_state(), fitted()); }

std::vector<CountRecord> scaled_records(const qcore::DensityMatrix& rho, double scale) {
  std::vector<CountRecord> out;
  for (auto s : {WitnessSetting::XXZZ, WitnessSetting::ZZXX}) {
    CountRecord r;
    r.setting = to_string(s);
    r.duration = 1.0;
    r.rate = scale;
    for (double p : setting_distribution(rho, s)) r.counts.push_back(static_cast<std::uint64_t>(std::llround(p * scale)));
    out.push_back(r);
  }
  return out;
}

void check_identities(const WitnessReport& r) {
  double sum = 0.0;
  for (const auto& t : r.terms) sum += t.value;
  CHECK(r.w_value == doctest::Approx((4.0 - sum) / 2.0).epsilon(1e-14));
  CHECK(r.fidelity_lower_bound == doctest::Approx(0.5 - 0.5 * r.w_value).epsilon(1e-14));
  CHECK(r.bound_stderr == doctest::Approx(0.5 * r.w_stderr).epsilon(1e-14));
}

}  // namespace

TEST_CASE("witness_value examples") {
  const auto ideal = witness_value(cluster::c4_state());
  CHECK(ideal.w_value == doctest::Approx(-1.0).epsilon(kTol));
  CHECK(ideal.fidelity_lower_bound == doctest::Approx(1.0).epsilon(kTol));
  for (const auto& t : ideal.terms) {
    CHECK(t.value == doctest::Approx(1.0).epsilon(kTol));
    CHECK(t.standard_error == 0.0);
  }
  CHECK(witness_value(qcore::DensityMatrix::maximally_mixed(4)).w_value == doctest::Approx(2.0).epsilon(kTol));

  const auto table = witness_from_terms(reference::kWitnessTermValues);
  CHECK(std::abs(table.w_value - (-0.7656)) < 5e-4);
  CHECK(std::abs(table.fidelity_lower_bound - 0.8828) < 5e-4);
  check_identities(table);
  for (std::size_t t = 0; t < 6; ++t) CHECK(table.terms[t].name == cluster::kWitnessTerms[t]);
}

TEST_CASE("witness bound holds on 1000 random density matrices") {
  std::mt19937_64 rng(51);
  const auto c4 = cluster::c4_state();
  for (int trial = 0; trial < 1000; ++trial) {
    oracle::Mat m = oracle::random_density(4, rng);
    // Mix toward the cluster state so the bound is also probed where it is non-trivial.
    const double w = double(trial % 10) / 10.0;
    m = (1 - w) * m + w * c4.amplitudes() * c4.amplitudes().adjoint();
    const qcore::DensityMatrix rho(m);
    const auto report = witness_value(rho);
    check_identities(report);
    CHECK(report.fidelity_lower_bound <= qcore::fidelity(rho, c4) + 1e-9);
  }
}

TEST_CASE("setting distributions") {
  const auto rho = fitted_state();
  for (auto s : {WitnessSetting::XXZZ, WitnessSetting::ZZXX}) {
    const auto d = setting_distribution(rho, s);
    double total = 0.0;
    for (double p : d) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(parse_witness_setting("ZZXX") == WitnessSetting::ZZXX);
  CHECK_THROWS_AS(parse_witness_setting("XYZZ"), std::invalid_argument);
}

TEST_CASE("simulate_counts examples") {
  const std::array<double, 4> point{1, 0, 0, 0};
  const auto r = simulate_counts(point, 100.0, 1.0, 3);
  CHECK(r.counts[0] == r.total());
  CHECK(r.counts[1] + r.counts[2] + r.counts[3] == 0);

  const std::array<double, 4> uniform{0.25, 0.25, 0.25, 0.25};
  const auto u = simulate_counts(uniform, 1.2e4, 1.0, 4);
  for (auto c : u.counts) CHECK(std::abs(double(c) - 3000.0) < 5 * std::sqrt(3000.0));
  CHECK(std::abs(double(u.total()) - 1.2e4) < 5 * std::sqrt(1.2e4));

  const auto again = simulate_counts(uniform, 1.2e4, 1.0, 4);
  CHECK(again.counts == u.counts);
  CHECK(simulate_counts(uniform, 1.2e4, 1.0, 5).counts != u.counts);

  const std::array<double, 2> bad{0.7, 0.2};
  CHECK_THROWS_AS(simulate_counts(bad, 10.0, 1.0, 1), std::invalid_argument);
  const std::array<double, 2> neg{1.2, -0.2};
  CHECK_THROWS_AS(simulate_counts(neg, 10.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_counts(uniform, 10.0, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_counts(uniform, -1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("simulated totals follow Poisson statistics") {
  const std::array<double, 1> one{1.0};
  double sum = 0.0, sq = 0.0;
  const int n = 400;
  for (int i = 0; i < n; ++i) {
    const double t = double(simulate_counts(one, 500.0, 2.0, 100 + i).total());
    sum += t;
    sq += t * t;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean - 1000.0) < 5 * std::sqrt(1000.0 / n));
  CHECK(var == doctest::Approx(1000.0).epsilon(0.25));
}

TEST_CASE("witness_from_counts: infinite-count limit and errors") {
  const auto rho = fitted_state();
  const auto exact = witness_value(rho);
  const auto big = scaled_records(rho, 1e9);
  const auto est = witness_from_counts(big);
  CHECK(std::abs(est.w_value - exact.w_value) < 1e-4);
  for (std::size_t t = 0; t < 6; ++t) CHECK(std::abs(est.terms[t].value - exact.terms[t].value) < 1e-4);
  check_identities(est);

  auto zero = big;
  zero[0].duration = 0.0;
  CHECK_THROWS_AS(witness_from_counts(zero), std::invalid_argument);
  auto empty = big;
  std::fill(empty[1].counts.begin(), empty[1].counts.end(), 0);
  CHECK_THROWS_AS(witness_from_counts(empty), std::invalid_argument);
  const std::vector<CountRecord> one{big[0]};
  CHECK_THROWS_AS(witness_from_counts(one), std::invalid_argument);
}

TEST_CASE("delta-method errors") {
  // Ideal state: every term is deterministic, so every error vanishes.
  const auto ideal = witness_from_counts(simulate_witness_counts(qcore::DensityMatrix(cluster::c4_state()), 1.2e4, 1.0, 9));
  CHECK(ideal.w_value == doctest::Approx(-1.0).epsilon(kTol));
  CHECK(ideal.w_stderr == 0.0);

  // Single-term oracle: value v from N counts has variance (1 - v^2) / N.
  const auto rho = fitted_state();
  const auto records = simulate_witness_counts(rho, 1.2e4, 1.0, 10);
  const auto rep = witness_from_counts(records);
  for (std::size_t t = 0; t < 6; ++t) {
    const double n = double(records[t < 3 ? 0 : 1].total());
    const double v = rep.terms[t].value;
    CHECK(rep.terms[t].standard_error == doctest::Approx(std::sqrt((1 - v * v) / n)).epsilon(1e-9));
  }
  CHECK(std::abs(rep.w_stderr / reference::kWitnessError - 1.0) < 1.0);
}

TEST_CASE("delta-method w_stderr agrees with the empirical spread of repeated runs") {
  const auto rho = fitted_state();
  std::vector<double> ws;
  double predicted = 0.0;
  const int runs = 300;
  for (int i = 0; i < runs; ++i) {
    const auto rep = witness_from_counts(simulate_witness_counts(rho, 1.2e4, 1.0, 1000 + i));
    ws.push_back(rep.w_value);
    predicted += rep.w_stderr / runs;
  }
  double mean = 0.0;
  for (double w : ws) mean += w / runs;
  double var = 0.0;
  for (double w : ws) var += (w - mean) * (w - mean) / (runs - 1);
  CHECK(std::sqrt(var) == doctest::Approx(predicted).epsilon(0.15));
  CHECK(std::abs(mean - witness_value(rho).w_value) < 4 * predicted / std::sqrt(double(runs)));

  const auto records = simulate_witness_counts(rho, 1.2e4, 1.0, 11);
  const double boot = witness_bootstrap_stderr(records, 400, 12);
  CHECK(boot == doctest::Approx(witness_from_counts(records).w_stderr).epsilon(0.2));
  CHECK(witness_bootstrap_stderr(records, 400, 12) == boot);
}

TEST_CASE("stderr scales as 1/sqrt(duration)") {
  const auto rho = fitted_state();
  const double base = witness_from_counts(simulate_witness_counts(rho, 1.2e4, 1.0, 21)).w_stderr;
  for (double d : {4.0, 16.0}) {
    const double s = witness_from_counts(simulate_witness_counts(rho, 1.2e4, d, 21)).w_stderr;
    CHECK(s * std::sqrt(d) == doctest::Approx(base).epsilon(0.2));
  }
}

TEST_CASE("counted witness converges at long duration") {
  const auto rho = fitted_state();
  const auto rep = witness_from_counts(simulate_witness_counts(rho, 1.2e4, 1000.0, 31));
  CHECK(std::abs(rep.w_value - witness_value(rho).w_value) < 1e-2);
}

TEST_CASE("gate fidelity reports") {
  for (auto kind : {mbqc::ClusterKind::Horseshoe, mbqc::ClusterKind::Box}) {
    const auto ideal = gate_fidelity_report(kind, kind == mbqc::ClusterKind::Box ? std::numbers::pi : 0.0, 0.0, {});
    for (const auto& b : ideal) {
      CHECK(b.fidelity == doctest::Approx(1.0).epsilon(kTol));
      CHECK(b.probability == doctest::Approx(0.25).epsilon(kTol));
    }
    const auto noisy = gate_fidelity_report(kind, 0.3, 1.1, fitted());
    for (const auto& b : noisy) {
      CHECK(b.fidelity < 1.0);
      CHECK(b.fidelity > 0.85);
    }
  }
  // White noise alone: F = (1 - p) + p / 4 on every branch.
  const auto white = gate_fidelity_report(mbqc::ClusterKind::Horseshoe, 0.0, 0.0, {0, 0, 0.2});
  for (const auto& b : white) CHECK(b.fidelity == doctest::Approx(0.8 + 0.05).epsilon(1e-12));
}

TEST_CASE("grover reports") {
  for (int k = 0; k < 4; ++k) {
    const mbqc::GroverMark mark{k / 2, k % 2};
    const auto on = grover_report({}, true, mark);
    CHECK(on.success == doctest::Approx(1.0).epsilon(kTol));
    CHECK(on.success_stderr == 0.0);
    const auto off = grover_report({}, false, mark);
    CHECK(off.success == doctest::Approx(0.25).epsilon(kTol));
    CHECK(off.success_stderr > 0.0);
  }
  const auto noisy = grover_report(fitted(), true);
  CHECK(noisy.success < 1.0);
  std::uint64_t total = 0;
  for (auto c : noisy.counts) total += c;
  CHECK(std::abs(double(total) - 1.2e4) < 5 * std::sqrt(1.2e4));
  CHECK(noisy.success_stderr == doctest::Approx(std::sqrt(noisy.success * (1 - noisy.success) / double(total))).epsilon(0.1));
}
