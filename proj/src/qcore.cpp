#include "oneway/qcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace oneway::qcore {

namespace {

int qubits_for_dimension(Eigen::Index dim) {
  if (dim < 1 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  const int n = std::countr_zero(static_cast<std::uint64_t>(dim));
  if (n > kMaxQubits) {
    throw std::invalid_argument("at most " + std::to_string(kMaxQubits) + " qubits are supported");
  }
  return n;
}

void check_qubit(int qubit, int num_qubits) {
  if (qubit < 0 || qubit >= num_qubits) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for " +
                            std::to_string(num_qubits) + " qubits");
  }
}

void check_pair(int j, int k, int num_qubits) {
  check_qubit(j, num_qubits);
  check_qubit(k, num_qubits);
  if (j == k) throw std::invalid_argument("two-qubit gate needs distinct qubits");
}

std::size_t bit_mask(int qubit, int num_qubits) { return std::size_t{1} << (num_qubits - 1 - qubit); }

// Full index of a residual (n-1 qubit) index with `bit` reinserted at `qubit`.
std::size_t insert_bit(std::size_t reduced, int qubit, int bit, int num_qubits) {
  const int low_bits = num_qubits - 1 - qubit;
  const std::size_t low = reduced & ((std::size_t{1} << low_bits) - 1);
  const std::size_t high = reduced >> low_bits;
  return (high << (low_bits + 1)) | (static_cast<std::size_t>(bit) << low_bits) | low;
}

// Left-multiplies the rows of `m` by `g` acting on `qubit`.
void apply_rows(Matrix& m, int qubit, int num_qubits, const Eigen::Matrix2cd& g) {
  const std::size_t mask = bit_mask(qubit, num_qubits);
  const auto dim = static_cast<std::size_t>(m.rows());
  for (std::size_t i0 = 0; i0 < dim; ++i0) {
    if (i0 & mask) continue;
    const std::size_t i1 = i0 | mask;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex a0 = m(i0, c);
      const Complex a1 = m(i1, c);
      m(i0, c) = g(0, 0) * a0 + g(0, 1) * a1;
      m(i1, c) = g(1, 0) * a0 + g(1, 1) * a1;
    }
  }
}

Matrix conjugate_by(const Matrix& rho, int qubit, int num_qubits, const Eigen::Matrix2cd& g) {
  Matrix m = rho;
  apply_rows(m, qubit, num_qubits, g);
  Matrix t = m.adjoint();
  apply_rows(t, qubit, num_qubits, g);
  return t.adjoint();
}

std::vector<double> permutation_signs(std::size_t dim, int j, int k, int num_qubits) {
  std::vector<double> signs(dim, 1.0);
  const std::size_t mj = bit_mask(j, num_qubits);
  const std::size_t mk = bit_mask(k, num_qubits);
  for (std::size_t b = 0; b < dim; ++b) {
    if ((b & mj) && (b & mk)) signs[b] = -1.0;
  }
  return signs;
}

std::size_t swap_index(std::size_t b, int qa, int qb, int num_qubits) {
  const std::size_t ma = bit_mask(qa, num_qubits);
  const std::size_t mb = bit_mask(qb, num_qubits);
  const bool ba = b & ma;
  const bool bb = b & mb;
  if (ba == bb) return b;
  return b ^ ma ^ mb;
}

// Per-letter factor of P|b> = phase(b) |b ^ flip>.
struct PauliAction {
  std::size_t flip = 0;
  std::vector<std::pair<char, std::size_t>> letters;  // (letter, mask) for Y/Z phases

  Complex phase(std::size_t b) const {
    Complex ph = 1.0;
    for (const auto& [letter, mask] : letters) {
      const bool set = b & mask;
      if (letter == 'Z') {
        if (set) ph = -ph;
      } else {  // Y|0> = i|1>, Y|1> = -i|0>
        ph *= set ? Complex(0, -1) : Complex(0, 1);
      }
    }
    return ph;
  }
};

PauliAction pauli_action(const PauliString& p) {
  PauliAction action;
  const int n = p.num_qubits();
  for (int q = 0; q < n; ++q) {
    const char c = p.letters[q];
    const std::size_t mask = bit_mask(q, n);
    if (c == 'X' || c == 'Y') action.flip |= mask;
    if (c == 'Y' || c == 'Z') action.letters.emplace_back(c, mask);
  }
  return action;
}

double real_part_checked(Complex value) {
  // Elementwise Hermiticity within kTol bounds the imaginary residue by d * kTol.
  if (std::abs(value.imag()) > 1e-8) {
    throw std::logic_error("expectation value has imaginary residue " + std::to_string(value.imag()));
  }
  return value.real();
}

Eigen::Vector2cd z_vector(int outcome) {
  Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
  v(outcome) = 1.0;
  return v;
}

std::array<double, 2> probabilities_for(const StateVector& state, int qubit,
                                        const Eigen::Vector2cd& v0, const Eigen::Vector2cd& v1);

Vector project(const StateVector& state, int qubit, const Eigen::Vector2cd& v) {
  const int n = state.num_qubits();
  const std::size_t reduced_dim = state.dimension() / 2;
  Vector out(static_cast<Eigen::Index>(reduced_dim));
  for (std::size_t j = 0; j < reduced_dim; ++j) {
    out(j) = std::conj(v(0)) * state.amplitude(insert_bit(j, qubit, 0, n)) +
             std::conj(v(1)) * state.amplitude(insert_bit(j, qubit, 1, n));
  }
  return out;
}

Matrix project(const DensityMatrix& rho, int qubit, const Eigen::Vector2cd& v) {
  const int n = rho.num_qubits();
  const auto reduced_dim = static_cast<Eigen::Index>(rho.dimension() / 2);
  const Matrix& m = rho.matrix();
  Matrix out(reduced_dim, reduced_dim);
  for (Eigen::Index j = 0; j < reduced_dim; ++j) {
    for (Eigen::Index k = 0; k < reduced_dim; ++k) {
      Complex acc = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          acc += std::conj(v(a)) * v(b) *
                 m(insert_bit(j, qubit, a, n), insert_bit(k, qubit, b, n));
        }
      }
      out(j, k) = acc;
    }
  }
  return out;
}

std::array<double, 2> probabilities_for(const StateVector& state, int qubit,
                                        const Eigen::Vector2cd& v0, const Eigen::Vector2cd& v1) {
  check_qubit(qubit, state.num_qubits());
  return {project(state, qubit, v0).squaredNorm(), project(state, qubit, v1).squaredNorm()};
}

std::array<double, 2> probabilities_for(const DensityMatrix& rho, int qubit,
                                        const Eigen::Vector2cd& v0, const Eigen::Vector2cd& v1) {
  check_qubit(qubit, rho.num_qubits());
  return {std::max(0.0, project(rho, qubit, v0).trace().real()),
          std::max(0.0, project(rho, qubit, v1).trace().real())};
}

template <class State>
MeasurementResult<State> measure_in(const State& state, int qubit, const Eigen::Vector2cd& v0,
                                    const Eigen::Vector2cd& v1, OutcomeSource& source) {
  const auto probs = probabilities_for(state, qubit, v0, v1);
  const int outcome = source.draw(probs[0] / (probs[0] + probs[1]));
  const double p = probs[outcome];
  const Eigen::Vector2cd& v = outcome == 0 ? v0 : v1;
  if constexpr (std::is_same_v<State, StateVector>) {
    return {outcome, p, StateVector(project(state, qubit, v) / std::sqrt(p))};
  } else {
    return {outcome, p, make_density_unchecked(project(state, qubit, v) / p)};
  }
}

}  // namespace

// --- StateVector -------------------------------------------------------------

StateVector::StateVector(Vector amplitudes)
    : num_qubits_(qubits_for_dimension(amplitudes.size())), amplitudes_(std::move(amplitudes)) {
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kTol) {
    throw std::invalid_argument("state vector norm " + std::to_string(norm) + " is not 1");
  }
}

StateVector StateVector::basis(int num_qubits, std::size_t index) {
  if (num_qubits < 0 || num_qubits > kMaxQubits) throw std::invalid_argument("bad qubit count");
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (index >= dim) throw std::out_of_range("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::from_bits(std::string_view bits) {
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("basis label must be a 0/1 string");
    index = (index << 1) | static_cast<std::size_t>(c - '0');
  }
  return basis(static_cast<int>(bits.size()), index);
}

StateVector StateVector::normalized(Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm < kImpossible) throw std::invalid_argument("cannot normalize a zero vector");
  return StateVector(amplitudes / norm);
}

// --- DensityMatrix -----------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix matrix, Unchecked)
    : num_qubits_(qubits_for_dimension(matrix.rows())), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("density matrix must be square");
}

DensityMatrix::DensityMatrix(Matrix matrix) : DensityMatrix(std::move(matrix), Unchecked{}) {
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kTol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > kTol) {
    throw std::invalid_argument("density matrix trace " + std::to_string(tr.real()) + " is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kTol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

DensityMatrix::DensityMatrix(const StateVector& pure)
    : DensityMatrix(Matrix(pure.amplitudes() * pure.amplitudes().adjoint()), Unchecked{}) {}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  if (num_qubits < 0 || num_qubits > kMaxQubits) throw std::invalid_argument("bad qubit count");
  const auto dim = Eigen::Index{1} << num_qubits;
  return make_density_unchecked(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix make_density_unchecked(Matrix matrix) {
  return DensityMatrix(std::move(matrix), DensityMatrix::Unchecked{});
}

// --- PauliString -------------------------------------------------------------

PauliString PauliString::parse(std::string_view word) {
  PauliString p;
  if (!word.empty() && (word.front() == '-' || word.front() == '+')) {
    p.coefficient = word.front() == '-' ? -1.0 : 1.0;
    word.remove_prefix(1);
  }
  if (word.empty()) throw std::invalid_argument("empty Pauli word");
  for (char c : word) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
    }
  }
  p.letters = std::string(word);
  return p;
}

Matrix PauliString::matrix() const {
  const int n = num_qubits();
  const auto dim = static_cast<std::size_t>(1) << n;
  const PauliAction action = pauli_action(*this);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t b = 0; b < dim; ++b) {
    m(b ^ action.flip, b) = coefficient * action.phase(b);
  }
  return m;
}

// --- SingleQubitGate ---------------------------------------------------------

SingleQubitGate::SingleQubitGate(const Eigen::Matrix2cd& matrix) : matrix_(matrix) {
  if ((matrix_ * matrix_.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > kTol) {
    throw std::invalid_argument("single-qubit gate is not unitary");
  }
}

SingleQubitGate SingleQubitGate::identity() { return SingleQubitGate(Eigen::Matrix2cd::Identity()); }

SingleQubitGate SingleQubitGate::hadamard() {
  Eigen::Matrix2cd m;
  const double r = 1.0 / std::numbers::sqrt2;
  m << r, r, r, -r;
  return SingleQubitGate(m);
}

SingleQubitGate SingleQubitGate::pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return SingleQubitGate(m);
}

SingleQubitGate SingleQubitGate::pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return SingleQubitGate(m);
}

SingleQubitGate SingleQubitGate::pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return SingleQubitGate(m);
}

SingleQubitGate SingleQubitGate::rz(double angle) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::polar(1.0, -angle / 2);
  m(1, 1) = std::polar(1.0, angle / 2);
  return SingleQubitGate(m);
}

SingleQubitGate operator*(const SingleQubitGate& lhs, const SingleQubitGate& rhs) {
  return SingleQubitGate(lhs.matrix() * rhs.matrix());
}

// --- Gate application --------------------------------------------------------

StateVector apply_gate(const StateVector& state, int qubit, const SingleQubitGate& gate) {
  check_qubit(qubit, state.num_qubits());
  Matrix m = state.amplitudes();
  apply_rows(m, qubit, state.num_qubits(), gate.matrix());
  return StateVector::normalized(m.col(0));
}

DensityMatrix apply_gate(const DensityMatrix& rho, int qubit, const SingleQubitGate& gate) {
  check_qubit(qubit, rho.num_qubits());
  return make_density_unchecked(conjugate_by(rho.matrix(), qubit, rho.num_qubits(), gate.matrix()));
}

StateVector apply_cphase(const StateVector& state, int qubit_j, int qubit_k) {
  check_pair(qubit_j, qubit_k, state.num_qubits());
  const auto signs = permutation_signs(state.dimension(), qubit_j, qubit_k, state.num_qubits());
  Vector v = state.amplitudes();
  for (std::size_t b = 0; b < signs.size(); ++b) v(b) *= signs[b];
  return StateVector(std::move(v));
}

DensityMatrix apply_cphase(const DensityMatrix& rho, int qubit_j, int qubit_k) {
  check_pair(qubit_j, qubit_k, rho.num_qubits());
  const auto signs = permutation_signs(rho.dimension(), qubit_j, qubit_k, rho.num_qubits());
  Matrix m = rho.matrix();
  for (std::size_t r = 0; r < signs.size(); ++r) {
    for (std::size_t c = 0; c < signs.size(); ++c) m(r, c) *= signs[r] * signs[c];
  }
  return make_density_unchecked(std::move(m));
}

StateVector apply_swap(const StateVector& state, int qubit_a, int qubit_b) {
  check_pair(qubit_a, qubit_b, state.num_qubits());
  Vector v(state.amplitudes().size());
  for (std::size_t b = 0; b < state.dimension(); ++b) {
    v(swap_index(b, qubit_a, qubit_b, state.num_qubits())) = state.amplitude(b);
  }
  return StateVector(std::move(v));
}

DensityMatrix apply_swap(const DensityMatrix& rho, int qubit_a, int qubit_b) {
  check_pair(qubit_a, qubit_b, rho.num_qubits());
  const int n = rho.num_qubits();
  const std::size_t dim = rho.dimension();
  Matrix m(rho.matrix().rows(), rho.matrix().cols());
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      m(swap_index(r, qubit_a, qubit_b, n), swap_index(c, qubit_a, qubit_b, n)) = rho.matrix()(r, c);
    }
  }
  return make_density_unchecked(std::move(m));
}

StateVector tensor(const StateVector& lhs, const StateVector& rhs) {
  Vector v(lhs.amplitudes().size() * rhs.amplitudes().size());
  for (Eigen::Index i = 0; i < lhs.amplitudes().size(); ++i) {
    v.segment(i * rhs.amplitudes().size(), rhs.amplitudes().size()) = lhs.amplitudes()(i) * rhs.amplitudes();
  }
  return StateVector(std::move(v));
}

// --- Observables -------------------------------------------------------------

double expectation(const StateVector& state, const PauliString& observable) {
  if (observable.num_qubits() != state.num_qubits()) {
    throw std::invalid_argument("Pauli word length does not match the qubit count");
  }
  const PauliAction action = pauli_action(observable);
  Complex acc = 0.0;
  for (std::size_t b = 0; b < state.dimension(); ++b) {
    acc += std::conj(state.amplitude(b ^ action.flip)) * action.phase(b) * state.amplitude(b);
  }
  return observable.coefficient * real_part_checked(acc);
}

double expectation(const DensityMatrix& rho, const PauliString& observable) {
  if (observable.num_qubits() != rho.num_qubits()) {
    throw std::invalid_argument("Pauli word length does not match the qubit count");
  }
  const PauliAction action = pauli_action(observable);
  Complex acc = 0.0;
  for (std::size_t b = 0; b < rho.dimension(); ++b) {
    acc += action.phase(b) * rho.matrix()(b, b ^ action.flip);
  }
  return observable.coefficient * real_part_checked(acc);
}

double overlap(const StateVector& a, const StateVector& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("overlap of states with different dimension");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
  if (rho.dimension() != target.dimension()) throw std::invalid_argument("fidelity dimension mismatch");
  const Complex f = target.amplitudes().dot(rho.matrix() * target.amplitudes());
  return std::clamp(f.real(), 0.0, 1.0);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.num_qubits();
  std::vector<bool> kept(n, false);
  for (int q : keep) {
    check_qubit(q, n);
    if (kept[q]) throw std::invalid_argument("duplicate qubit in partial trace");
    kept[q] = true;
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!kept[q]) traced.push_back(q);
  }
  const int nk = static_cast<int>(keep.size());
  const std::size_t dim = rho.dimension();
  std::vector<std::size_t> keep_index(dim), trace_index(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    std::size_t ki = 0, ti = 0;
    for (int q : keep) ki = (ki << 1) | static_cast<std::size_t>(qubit_bit(b, q, n));
    for (int q : traced) ti = (ti << 1) | static_cast<std::size_t>(qubit_bit(b, q, n));
    keep_index[b] = ki;
    trace_index[b] = ti;
  }
  const auto kdim = Eigen::Index{1} << nk;
  Matrix out = Matrix::Zero(kdim, kdim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if (trace_index[r] == trace_index[c]) out(keep_index[r], keep_index[c]) += rho.matrix()(r, c);
    }
  }
  return make_density_unchecked(std::move(out));
}

double entanglement_entropy(const StateVector& state, std::span<const int> partition) {
  const int n = state.num_qubits();
  if (partition.empty() || static_cast<int>(partition.size()) >= n) {
    throw std::invalid_argument("entropy partition must be a nonempty proper subset");
  }
  const DensityMatrix reduced = partial_trace(DensityMatrix(state), partition);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(reduced.matrix(), Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (double lambda : solver.eigenvalues()) {
    if (lambda > 1e-14) entropy -= lambda * std::log2(lambda);
  }
  return std::max(0.0, entropy);
}

// --- Measurement --------------------------------------------------------------

Eigen::Vector2cd basis_vector(double alpha, int outcome) {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Vector2cd v;
  v << r, (outcome == 0 ? 1.0 : -1.0) * std::polar(r, alpha);
  return v;
}

OutcomeSource OutcomeSource::forced(std::vector<int> bits) {
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("forced outcomes must be bits");
  }
  OutcomeSource s;
  s.forced_ = std::move(bits);
  return s;
}

OutcomeSource OutcomeSource::sampled(Rng& rng) {
  OutcomeSource s;
  s.rng_ = &rng;
  return s;
}

int OutcomeSource::draw(double probability_zero) {
  if (rng_ != nullptr) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    return uniform(*rng_) < probability_zero ? 0 : 1;
  }
  if (next_ >= forced_.size()) throw std::logic_error("forced outcome queue exhausted");
  const int bit = forced_[next_++];
  const double weight = bit == 0 ? probability_zero : 1.0 - probability_zero;
  if (weight < kImpossible) {
    throw ImpossibleOutcome("forced outcome " + std::to_string(bit) + " has zero probability");
  }
  return bit;
}

std::array<double, 2> outcome_probabilities(const StateVector& state, int qubit, double alpha) {
  return probabilities_for(state, qubit, basis_vector(alpha, 0), basis_vector(alpha, 1));
}

std::array<double, 2> outcome_probabilities(const DensityMatrix& rho, int qubit, double alpha) {
  return probabilities_for(rho, qubit, basis_vector(alpha, 0), basis_vector(alpha, 1));
}

MeasurementResult<StateVector> measure(const StateVector& state, int qubit, double alpha, OutcomeSource& source) {
  return measure_in(state, qubit, basis_vector(alpha, 0), basis_vector(alpha, 1), source);
}

MeasurementResult<DensityMatrix> measure(const DensityMatrix& rho, int qubit, double alpha, OutcomeSource& source) {
  return measure_in(rho, qubit, basis_vector(alpha, 0), basis_vector(alpha, 1), source);
}

MeasurementResult<StateVector> measure_z(const StateVector& state, int qubit, OutcomeSource& source) {
  return measure_in(state, qubit, z_vector(0), z_vector(1), source);
}

MeasurementResult<DensityMatrix> measure_z(const DensityMatrix& rho, int qubit, OutcomeSource& source) {
  return measure_in(rho, qubit, z_vector(0), z_vector(1), source);
}

// --- Channels -----------------------------------------------------------------

DensityMatrix dephase(const DensityMatrix& rho, int qubit, double lambda) {
  const int n = rho.num_qubits();
  check_qubit(qubit, n);
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("dephasing strength must lie in [0, 1]");
  const std::size_t mask = bit_mask(qubit, n);
  Matrix m = rho.matrix();
  for (std::size_t r = 0; r < rho.dimension(); ++r) {
    for (std::size_t c = 0; c < rho.dimension(); ++c) {
      if ((r & mask) != (c & mask)) m(r, c) *= 1.0 - lambda;
    }
  }
  return make_density_unchecked(std::move(m));
}

DensityMatrix mix_white_noise(const DensityMatrix& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("white-noise weight must lie in [0, 1]");
  const auto dim = rho.matrix().rows();
  return make_density_unchecked((1.0 - p) * rho.matrix() +
                                (p / static_cast<double>(dim)) * Matrix::Identity(dim, dim));
}

}  // namespace oneway::qcore
