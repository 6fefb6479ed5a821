#pragma once

// Dense state-vector and density-matrix primitives for a handful of qubits.
//
// Qubit 0 is the most significant bit of a basis-state label, so for n qubits
// the amplitude of |b_0 b_1 ... b_{n-1}> lives at index sum_q b_q 2^{n-1-q}.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace oneway::qcore {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

/// Tolerance for exact-arithmetic checks.
inline constexpr double kTol = 1e-10;
/// Born weights below this are treated as impossible branches.
inline constexpr double kImpossible = 1e-12;
inline constexpr int kMaxQubits = 6;

/// Raised when a forced measurement outcome has (numerically) zero weight.
class ImpossibleOutcome : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline int qubit_bit(std::size_t basis_index, int qubit, int num_qubits) {
  return static_cast<int>((basis_index >> (num_qubits - 1 - qubit)) & 1U);
}

class StateVector {
 public:
  /// Throws std::invalid_argument unless the length is 2^n (n <= kMaxQubits)
  /// and the norm is 1 within kTol.
  explicit StateVector(Vector amplitudes);

  /// Computational basis state |index>.
  static StateVector basis(int num_qubits, std::size_t index);
  /// Basis state from a bit string such as "0011" (qubit 0 first).
  static StateVector from_bits(std::string_view bits);
  /// Normalizes first; throws on a zero vector.
  static StateVector normalized(Vector amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }

 private:
  int num_qubits_;
  Vector amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity (eigenvalues >= -kTol).
  explicit DensityMatrix(Matrix matrix);
  /// Pure state |psi><psi|.
  explicit DensityMatrix(const StateVector& pure);

  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

 private:
  struct Unchecked {};
  DensityMatrix(Matrix matrix, Unchecked);
  friend DensityMatrix make_density_unchecked(Matrix matrix);

  int num_qubits_;
  Matrix matrix_;
};

/// Skips validation; for channel outputs whose validity follows from
/// construction (the property tests cover them).
DensityMatrix make_density_unchecked(Matrix matrix);

/// Tensor word over {I, X, Y, Z}, letter q acting on qubit q.
struct PauliString {
  std::string letters;
  double coefficient = 1.0;

  /// Accepts an optional leading sign, e.g. "-XXIZ". Throws on any other letter.
  static PauliString parse(std::string_view word);

  int num_qubits() const { return static_cast<int>(letters.size()); }
  Matrix matrix() const;
};

class SingleQubitGate {
 public:
  /// Throws std::invalid_argument if the matrix is not unitary within kTol.
  explicit SingleQubitGate(const Eigen::Matrix2cd& matrix);

  static SingleQubitGate identity();
  static SingleQubitGate hadamard();
  static SingleQubitGate pauli_x();
  static SingleQubitGate pauli_y();
  static SingleQubitGate pauli_z();
  /// exp(-i angle Z / 2).
  static SingleQubitGate rz(double angle);

  const Eigen::Matrix2cd& matrix() const { return matrix_; }
  SingleQubitGate adjoint() const { return SingleQubitGate(matrix_.adjoint()); }

 private:
  Eigen::Matrix2cd matrix_;
};

SingleQubitGate operator*(const SingleQubitGate& lhs, const SingleQubitGate& rhs);

StateVector apply_gate(const StateVector& state, int qubit, const SingleQubitGate& gate);
DensityMatrix apply_gate(const DensityMatrix& rho, int qubit, const SingleQubitGate& gate);

/// |j>|k> -> (-1)^{jk} |j>|k> on the two given qubits.
StateVector apply_cphase(const StateVector& state, int qubit_j, int qubit_k);
DensityMatrix apply_cphase(const DensityMatrix& rho, int qubit_j, int qubit_k);

StateVector apply_swap(const StateVector& state, int qubit_a, int qubit_b);
DensityMatrix apply_swap(const DensityMatrix& rho, int qubit_a, int qubit_b);

StateVector tensor(const StateVector& lhs, const StateVector& rhs);

double expectation(const StateVector& state, const PauliString& observable);
double expectation(const DensityMatrix& rho, const PauliString& observable);

/// |<a|b>|, insensitive to global phase.
double overlap(const StateVector& a, const StateVector& b);

/// <target| rho |target>.
double fidelity(const DensityMatrix& rho, const StateVector& target);

/// Reduced state on `keep` (in the order given).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Von Neumann entropy in bits of the reduced state on `partition`.
double entanglement_entropy(const StateVector& state, std::span<const int> partition);

/// Convenience for `std::initializer_list` callers.
inline double entanglement_entropy(const StateVector& state, std::initializer_list<int> partition) {
  return entanglement_entropy(state, std::span<const int>(partition.begin(), partition.size()));
}

/// Eigenvector of the measurement basis B(alpha): (|0> + (-1)^outcome e^{i alpha}|1>)/sqrt2.
Eigen::Vector2cd basis_vector(double alpha, int outcome);

/// Picks measurement outcomes: either a queue of forced bits or samples from an RNG.
class OutcomeSource {
 public:
  static OutcomeSource forced(std::vector<int> bits);
  static OutcomeSource sampled(Rng& rng);

  /// Returns the next outcome given the Born weight of outcome 0.
  /// Forced outcomes with weight below kImpossible raise ImpossibleOutcome.
  int draw(double probability_zero);

  bool is_forced() const { return rng_ == nullptr; }

 private:
  OutcomeSource() = default;
  std::vector<int> forced_;
  std::size_t next_ = 0;
  Rng* rng_ = nullptr;
};

template <class State>
struct MeasurementResult {
  int outcome;
  double probability;
  State residual;
};

/// Born weights of outcomes 0 and 1 of B(alpha) on `qubit`.
std::array<double, 2> outcome_probabilities(const StateVector& state, int qubit, double alpha);
std::array<double, 2> outcome_probabilities(const DensityMatrix& rho, int qubit, double alpha);

/// Projective B(alpha) measurement; the residual drops the measured qubit.
MeasurementResult<StateVector> measure(const StateVector& state, int qubit, double alpha, OutcomeSource& source);
MeasurementResult<DensityMatrix> measure(const DensityMatrix& rho, int qubit, double alpha, OutcomeSource& source);

/// Computational-basis measurement (outcome 0 = |0>); residual drops the qubit.
MeasurementResult<StateVector> measure_z(const StateVector& state, int qubit, OutcomeSource& source);
MeasurementResult<DensityMatrix> measure_z(const DensityMatrix& rho, int qubit, OutcomeSource& source);

/// Phase damping: coherences between |0> and |1> of `qubit` scaled by (1 - lambda).
DensityMatrix dephase(const DensityMatrix& rho, int qubit, double lambda);

/// (1 - p) rho + p I / d.
DensityMatrix mix_white_noise(const DensityMatrix& rho, double p);

}  // namespace oneway::qcore
