#ifndef WMTELE_TENSOR_HPP
#define WMTELE_TENSOR_HPP

// Dense complex linear algebra for registers of at most five qubits.
//
// Qubit ordering: the leftmost ket symbol is qubit 0 and is the most
// significant bit of the amplitude index, so |q0 q1 ... q(n-1)> lives at
// index q0*2^(n-1) + ... + q(n-1).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace wmtele {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using QubitOperator = Eigen::Matrix2cd;

inline constexpr int kMaxQubits = 5;

// Tolerances shared by the predicates below and by the test suites.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kProbabilityTol = 1e-10;

class PureState {
 public:
  PureState(int num_qubits, Vector amplitudes);

  // Computational basis state; bits read MSB-first (qubit 0 leftmost).
  static PureState basis(int num_qubits, std::size_t index);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }

  double norm_squared() const { return amplitudes_.squaredNorm(); }
  bool is_normalized(double tol = kAlgebraTol) const;

  // Throws std::domain_error when the norm vanishes.
  PureState normalized() const;

 private:
  int num_qubits_;
  Vector amplitudes_;
};

class MixedState {
 public:
  MixedState(int num_qubits, Matrix matrix);

  static MixedState from_pure(const PureState& s);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

  Complex trace() const { return matrix_.trace(); }
  bool is_hermitian(double tol = kAlgebraTol) const;
  bool is_positive_semidefinite(double tol = kProbabilityTol) const;
  bool is_normalized(double tol = kAlgebraTol) const;

  // Hermitian, PSD and unit trace.
  bool is_valid(double tol = kProbabilityTol) const;

  // Throws std::domain_error when the trace vanishes.
  MixedState normalized() const;

 private:
  int num_qubits_;
  Matrix matrix_;
};

// A single-qubit operator embedded as I ⊗ ... ⊗ op ⊗ ... ⊗ I.
class LiftedOperator {
 public:
  int num_qubits() const { return num_qubits_; }
  int target() const { return target_; }
  const QubitOperator& op() const { return op_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  friend LiftedOperator lift(const QubitOperator& op, int num_qubits, int target);
  LiftedOperator(int num_qubits, int target, QubitOperator op, Matrix matrix);

  int num_qubits_;
  int target_;
  QubitOperator op_;
  Matrix matrix_;
};

Matrix kron(const Matrix& a, const Matrix& b);

// Throws std::out_of_range for an invalid target or register size.
LiftedOperator lift(const QubitOperator& op, int num_qubits, int target);

// Matrix-vector product, no renormalization. Throws std::invalid_argument on
// a dimension mismatch.
PureState apply(const LiftedOperator& op, const PureState& s);
PureState apply(const Matrix& op, const PureState& s);

// op * rho * op^dagger.
MixedState conjugate(const LiftedOperator& op, const MixedState& rho);
MixedState conjugate(const Matrix& op, const MixedState& rho);

PureState tensor(const PureState& a, const PureState& b);
MixedState tensor(const MixedState& a, const MixedState& b);

// Reduced density operator on `keep` (ascending order of qubit index is
// used regardless of the order given). Throws std::invalid_argument when
// `keep` is empty, has duplicates or is out of range.
MixedState partial_trace(const MixedState& rho, std::span<const int> keep);

// Projects `on_qubits` of `s` onto `basis_state` and returns the unnormalized
// state of the remaining qubits; its squared norm is the outcome probability.
// The complement must be nonempty.
PureState project(const PureState& s, const PureState& basis_state, std::span<const int> on_qubits);

// Density-operator counterpart of project(): <b| rho |b> on the complement,
// unnormalized, trace equal to the outcome probability.
MixedState project(const MixedState& rho, const PureState& basis_state, std::span<const int> on_qubits);

Complex inner(const PureState& a, const PureState& b);

// <psi| rho |psi> for normalized arguments; Uhlmann fidelity with a pure state.
double fidelity(const PureState& psi, const MixedState& rho);
double fidelity(const PureState& a, const PureState& b);

bool is_unitary(const QubitOperator& op, double tol = kAlgebraTol);
bool is_diagonal(const QubitOperator& op, double tol = 0.0);
bool is_anti_diagonal(const QubitOperator& op, double tol = 0.0);

}  // namespace wmtele

#endif  // WMTELE_TENSOR_HPP
