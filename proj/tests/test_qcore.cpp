#include <doctest.h>

#include <numbers>

#include "oneway/cluster.hpp"
#include "oneway/qcore.hpp"
#include "oracle.hpp"

using namespace oneway::qcore;
using std::numbers::pi;

namespace {

StateVector random_sv(int n, std::mt19937_64& rng) { return StateVector(oracle::random_state(n, rng)); }

}  // namespace

TEST_CASE("state vector construction and validation") {
  CHECK(StateVector::basis(3, 5).amplitude(5) == Complex(1.0));
  CHECK(StateVector::from_bits("0011").amplitude(3) == Complex(1.0));
  CHECK_THROWS_AS(StateVector(Vector::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(StateVector(Vector::Constant(4, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::normalized(Vector::Zero(4)), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::from_bits("01x"), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::basis(kMaxQubits + 1, 0), std::invalid_argument);
  CHECK(StateVector::normalized(Vector::Constant(4, 3.0)).amplitude(2).real() == doctest::Approx(0.5));
}

TEST_CASE("density matrix validation") {
  Matrix bad = Matrix::Identity(4, 4);
  CHECK_THROWS_AS(DensityMatrix{bad}, std::invalid_argument);  // trace 4
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
  Matrix nonherm = Matrix::Identity(2, 2) / 2.0;
  nonherm(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{nonherm}, std::invalid_argument);
  CHECK(DensityMatrix::maximally_mixed(2).matrix().isApprox(Matrix::Identity(4, 4) / 4.0));
}

TEST_CASE("apply_gate examples") {
  const auto plus = apply_gate(StateVector::basis(1, 0), 0, SingleQubitGate::hadamard());
  CHECK(overlap(plus, StateVector(oracle::plus_n(1))) == doctest::Approx(1.0).epsilon(kTol));

  const double a = 0.73;
  const auto rz0 = apply_gate(StateVector::basis(1, 0), 0, SingleQubitGate::rz(a));
  CHECK(std::abs(rz0.amplitude(0) - std::polar(1.0, -a / 2)) < kTol);
  CHECK(std::abs(rz0.amplitude(1)) < kTol);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = random_sv(4, rng);
    const int q = trial % 4;
    const auto back = apply_gate(apply_gate(psi, q, SingleQubitGate::hadamard()), q, SingleQubitGate::hadamard());
    CHECK((back.amplitudes() - psi.amplitudes()).norm() < kTol);
  }
  CHECK_THROWS_AS(apply_gate(StateVector::basis(2, 0), 2, SingleQubitGate::pauli_x()), std::out_of_range);
  CHECK_THROWS_AS(SingleQubitGate(Eigen::Matrix2cd::Constant(1.0)), std::invalid_argument);
}

TEST_CASE("apply_gate agrees with the Kronecker-product operator") {
  std::mt19937_64 rng(12);
  const std::array gates{SingleQubitGate::hadamard(), SingleQubitGate::pauli_y(), SingleQubitGate::rz(1.1),
                         SingleQubitGate::pauli_x() * SingleQubitGate::rz(-0.4)};
  for (int n = 1; n <= 5; ++n) {
    for (int q = 0; q < n; ++q) {
      const auto psi = random_sv(n, rng);
      const auto& g = gates[(n + q) % gates.size()];
      const oracle::Vec expect = oracle::on_qubit(g.matrix(), q, n) * psi.amplitudes();
      CHECK((apply_gate(psi, q, g).amplitudes() - expect).norm() < kTol);

      const DensityMatrix rho(oracle::random_density(n, rng));
      const oracle::Mat u = oracle::on_qubit(g.matrix(), q, n);
      CHECK((apply_gate(rho, q, g).matrix() - u * rho.matrix() * u.adjoint()).norm() < kTol);
    }
  }
}

TEST_CASE("apply_cphase examples and oracle") {
  CHECK(apply_cphase(StateVector::from_bits("11"), 0, 1).amplitude(3) == Complex(-1.0));
  CHECK(apply_cphase(StateVector::from_bits("10"), 0, 1).amplitude(2) == Complex(1.0));
  std::mt19937_64 rng(13);
  const auto psi = random_sv(2, rng);
  CHECK((apply_cphase(apply_cphase(psi, 0, 1), 1, 0).amplitudes() - psi.amplitudes()).norm() < kTol);
  for (int n = 2; n <= 5; ++n) {
    const auto phi = random_sv(n, rng);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (j == k) continue;
        const oracle::Vec expect = oracle::cz(n, j, k) * phi.amplitudes();
        CHECK((apply_cphase(phi, j, k).amplitudes() - expect).norm() < kTol);
        const oracle::Vec swapped = oracle::swap(n, j, k) * phi.amplitudes();
        CHECK((apply_swap(phi, j, k).amplitudes() - swapped).norm() < kTol);
      }
  }
  CHECK_THROWS_AS(apply_cphase(StateVector::basis(2, 0), 1, 1), std::invalid_argument);
}

TEST_CASE("norm preservation under gates and CPhase") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 6;
    auto psi = random_sv(n, rng);
    for (int step = 0; step < 10; ++step) {
      const int q = static_cast<int>(rng() % n);
      psi = apply_gate(psi, q, SingleQubitGate::rz(double(rng() % 100) / 10.0) * SingleQubitGate::hadamard());
      if (n > 1) psi = apply_cphase(psi, q, (q + 1) % n);
    }
    CHECK(std::abs(psi.amplitudes().norm() - 1.0) < kTol);
  }
}

TEST_CASE("expectation examples") {
  const auto c4 = oneway::cluster::c4_state();
  CHECK(expectation(c4, PauliString::parse("IIZZ")) == doctest::Approx(1.0).epsilon(kTol));
  CHECK(std::abs(expectation(DensityMatrix::maximally_mixed(4), PauliString::parse("ZZII"))) < kTol);
  CHECK(std::abs(expectation(StateVector::basis(4, 0), PauliString::parse("XXIZ"))) < kTol);
  CHECK(expectation(c4, PauliString::parse("-IIZZ")) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(PauliString::parse("XQ"), std::invalid_argument);
  CHECK_THROWS_AS(expectation(c4, PauliString::parse("XX")), std::invalid_argument);
}

TEST_CASE("expectation equals Tr(rho P) for random states and words") {
  std::mt19937_64 rng(15);
  const std::string letters = "IXYZ";
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    std::string word;
    for (int q = 0; q < n; ++q) word += letters[rng() % 4];
    const oracle::Vec psi = oracle::random_state(n, rng);
    const oracle::Mat p = oracle::pauli(word);
    const double expect = (psi.adjoint() * p * psi)(0, 0).real();
    CHECK(std::abs(expectation(StateVector(psi), PauliString::parse(word)) - expect) < kTol);
    const oracle::Mat rho = oracle::random_density(n, rng);
    CHECK(std::abs(expectation(DensityMatrix(rho), PauliString::parse(word)) - (rho * p).trace().real()) < kTol);
  }
}

TEST_CASE("measure examples") {
  auto src0 = OutcomeSource::forced({0});
  const auto plus = StateVector(oracle::plus_n(1));
  const auto r = measure(plus, 0, 0.0, src0);
  CHECK(r.outcome == 0);
  CHECK(r.probability == doctest::Approx(1.0).epsilon(kTol));
  CHECK(r.residual.num_qubits() == 0);

  auto src1 = OutcomeSource::forced({1});
  CHECK_THROWS_AS(measure(plus, 0, 0.0, src1), ImpossibleOutcome);

  for (double a : {0.0, 0.3, pi / 2, 2.0, pi}) {
    const auto p = outcome_probabilities(StateVector::basis(1, 0), 0, a);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(kTol));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(kTol));
  }
}

TEST_CASE("measuring qubit 2 of C4 at pi matches projector arithmetic") {
  const auto c4 = oneway::cluster::c4_state();
  for (int outcome = 0; outcome < 2; ++outcome) {
    auto src = OutcomeSource::forced({outcome});
    const auto r = measure(c4, 1, pi, src);
    // <b| on qubit 1 as a 8x16 operator built by hand.
    const oracle::Mat bra = oracle::b_vec(pi, outcome).adjoint();
    const oracle::Mat op = oracle::kron_all({oracle::I2(), bra, oracle::I2(), oracle::I2()});
    const oracle::Vec proj = op * c4.amplitudes();
    CHECK(r.probability == doctest::Approx(proj.squaredNorm()).epsilon(kTol));
    CHECK(r.probability == doctest::Approx(0.5).epsilon(kTol));
    CHECK(oracle::abs_overlap(r.residual.amplitudes(), proj / proj.norm()) == doctest::Approx(1.0).epsilon(kTol));
  }
}

TEST_CASE("measurement completeness and density/state agreement") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    const int q = static_cast<int>(rng() % n);
    const double a = std::uniform_real_distribution<double>(0, 2 * pi)(rng);
    const auto psi = random_sv(n, rng);
    const auto p = outcome_probabilities(psi, q, a);
    CHECK(std::abs(p[0] + p[1] - 1.0) < kTol);
    const auto pr = outcome_probabilities(DensityMatrix(psi), q, a);
    CHECK(std::abs(pr[0] - p[0]) < kTol);
    const auto rho = DensityMatrix(oracle::random_density(n, rng));
    const auto pm = outcome_probabilities(rho, q, a);
    CHECK(std::abs(pm[0] + pm[1] - 1.0) < kTol);
    if (n > 1 && p[0] > 1e-6) {
      auto s1 = OutcomeSource::forced({0});
      auto s2 = OutcomeSource::forced({0});
      const auto rs = measure(psi, q, a, s1);
      const auto rd = measure(DensityMatrix(psi), q, a, s2);
      CHECK(fidelity(rd.residual, rs.residual) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(oracle::is_valid_density(rd.residual.matrix()));
    }
  }
}

TEST_CASE("measure_z and sampled outcome statistics") {
  const auto bell = StateVector::normalized(oracle::ket("00") + oracle::ket("11"));
  auto src = OutcomeSource::forced({1});
  const auto r = measure_z(bell, 0, src);
  CHECK(r.outcome == 1);
  CHECK(std::abs(r.residual.amplitude(1)) == doctest::Approx(1.0));

  Rng rng(99);
  auto sampled = OutcomeSource::sampled(rng);
  const auto psi = StateVector::normalized(oracle::ket("0") * 0.6 + oracle::ket("1") * 0.8);
  int ones = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) ones += measure_z(psi, 0, sampled).outcome;
  const double sigma = std::sqrt(0.64 * 0.36 / n);
  CHECK(std::abs(double(ones) / n - 0.64) < 4 * sigma);
}

TEST_CASE("fidelity examples") {
  const auto c4 = oneway::cluster::c4_state();
  CHECK(fidelity(DensityMatrix(c4), c4) == doctest::Approx(1.0).epsilon(kTol));
  CHECK(fidelity(DensityMatrix::maximally_mixed(4), c4) == doctest::Approx(1.0 / 16).epsilon(kTol));
}

TEST_CASE("entanglement entropy examples and Schmidt oracle") {
  const auto prod = StateVector::normalized(oracle::kron(oracle::plus_n(1), oracle::ket("0")));
  CHECK(std::abs(entanglement_entropy(prod, {0})) < kTol);
  CHECK(std::abs(entanglement_entropy(prod, {1})) < kTol);
  const auto bell = StateVector::normalized(oracle::ket("00") + oracle::ket("11"));
  CHECK(entanglement_entropy(bell, {0}) == doctest::Approx(1.0).epsilon(kTol));
  const auto c4 = oneway::cluster::c4_state();
  CHECK(entanglement_entropy(c4, {0}) == doctest::Approx(1.0).epsilon(kTol));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    const oracle::Vec psi = oracle::random_state(n, rng);
    std::vector<int> part;
    for (int q = 0; q < n; ++q)
      if (rng() % 2) part.push_back(q);
    if (part.empty() || static_cast<int>(part.size()) == n) part = {n - 1};
    const double expect = oracle::schmidt_entropy(psi, n, part);
    CHECK(std::abs(entanglement_entropy(StateVector(psi), part) - expect) < 1e-9);
  }
}

TEST_CASE("partial trace against the Kronecker oracle") {
  std::mt19937_64 rng(18);
  const oracle::Mat a = oracle::random_density(1, rng);
  const oracle::Mat b = oracle::random_density(2, rng);
  const DensityMatrix rho(oracle::kron(a, b));
  const std::array<int, 1> keep0{0};
  CHECK((partial_trace(rho, keep0).matrix() - a).norm() < kTol);
  const std::array<int, 2> keep12{1, 2};
  CHECK((partial_trace(rho, keep12).matrix() - b).norm() < kTol);
  const std::array<int, 2> keep21{2, 1};
  const oracle::Mat bs = oracle::swap(2, 0, 1) * b * oracle::swap(2, 0, 1);
  CHECK((partial_trace(rho, keep21).matrix() - bs).norm() < kTol);
}

TEST_CASE("channels keep density matrices valid") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const DensityMatrix rho(oracle::random_density(n, rng));
    const auto d = dephase(rho, static_cast<int>(rng() % n), u(rng));
    CHECK(oracle::is_valid_density(d.matrix()));
    const auto w = mix_white_noise(d, u(rng));
    CHECK(oracle::is_valid_density(w.matrix()));
  }
  const DensityMatrix plus(StateVector(oracle::plus_n(1)));
  CHECK(std::abs(dephase(plus, 0, 1.0).matrix()(0, 1)) < kTol);
  CHECK(std::abs(dephase(plus, 0, 0.25).matrix()(0, 1) - 0.375) < kTol);
  CHECK(mix_white_noise(plus, 1.0).matrix().isApprox(Matrix::Identity(2, 2) / 2.0));
  CHECK_THROWS_AS(dephase(plus, 0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(mix_white_noise(plus, -0.1), std::invalid_argument);
}

TEST_CASE("tensor follows qubit-0-first ordering") {
  const auto t = tensor(StateVector::from_bits("1"), StateVector::from_bits("01"));
  CHECK(t.num_qubits() == 3);
  CHECK(t.amplitude(0b101) == Complex(1.0));
}
