#include "wmtele/tensor.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace wmtele {

namespace {

std::size_t dim_of(int num_qubits) { return std::size_t{1} << num_qubits; }

void check_register(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::out_of_range("register size " + std::to_string(num_qubits) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
  }
}

// Sorted, deduplicated qubit subset; throws on anything malformed.
std::vector<int> validated_subset(std::span<const int> qubits, int num_qubits, const char* what) {
  std::vector<int> out(qubits.begin(), qubits.end());
  std::sort(out.begin(), out.end());
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty qubit set");
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw std::invalid_argument(std::string(what) + ": duplicate qubit index");
  }
  if (out.front() < 0 || out.back() >= num_qubits) {
    throw std::invalid_argument(std::string(what) + ": qubit index out of range");
  }
  return out;
}

std::vector<int> complement(const std::vector<int>& subset, int num_qubits) {
  std::vector<int> out;
  for (int q = 0; q < num_qubits; ++q) {
    if (!std::binary_search(subset.begin(), subset.end(), q)) out.push_back(q);
  }
  return out;
}

// Scatter the bits of `local` (MSB-first over `positions`) into a full
// register index.
std::size_t scatter(std::size_t local, const std::vector<int>& positions, int num_qubits) {
  std::size_t full = 0;
  const auto k = positions.size();
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t bit = (local >> (k - 1 - j)) & 1U;
    full |= bit << (num_qubits - 1 - positions[j]);
  }
  return full;
}

}  // namespace

PureState::PureState(int num_qubits, Vector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  check_register(num_qubits);
  if (static_cast<std::size_t>(amplitudes_.size()) != dim_of(num_qubits)) {
    throw std::invalid_argument("amplitude vector length does not match 2^num_qubits");
  }
}

PureState PureState::basis(int num_qubits, std::size_t index) {
  check_register(num_qubits);
  if (index >= dim_of(num_qubits)) throw std::out_of_range("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim_of(num_qubits)));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return {num_qubits, std::move(v)};
}

bool PureState::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) <= tol; }

PureState PureState::normalized() const {
  const double n = amplitudes_.norm();
  if (!(n > 0.0)) throw std::domain_error("cannot normalize a zero-norm state");
  return {num_qubits_, amplitudes_ / n};
}

MixedState::MixedState(int num_qubits, Matrix matrix) : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
  check_register(num_qubits);
  const auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw std::invalid_argument("density matrix shape does not match 2^num_qubits");
  }
}

MixedState MixedState::from_pure(const PureState& s) {
  return {s.num_qubits(), s.amplitudes() * s.amplitudes().adjoint()};
}

bool MixedState::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool MixedState::is_positive_semidefinite(double tol) const {
  const Matrix h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

bool MixedState::is_normalized(double tol) const { return std::abs(trace() - Complex{1.0, 0.0}) <= tol; }

bool MixedState::is_valid(double tol) const {
  return is_hermitian(tol) && is_positive_semidefinite(tol) && is_normalized(tol);
}

MixedState MixedState::normalized() const {
  const double t = trace().real();
  if (!(t > 0.0)) throw std::domain_error("cannot normalize a zero-trace density operator");
  return {num_qubits_, matrix_ / t};
}

LiftedOperator::LiftedOperator(int num_qubits, int target, QubitOperator op, Matrix matrix)
    : num_qubits_(num_qubits), target_(target), op_(std::move(op)), matrix_(std::move(matrix)) {}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

LiftedOperator lift(const QubitOperator& op, int num_qubits, int target) {
  check_register(num_qubits);
  if (target < 0 || target >= num_qubits) {
    throw std::out_of_range("lift target " + std::to_string(target) + " outside register of " +
                            std::to_string(num_qubits));
  }
  const auto left = static_cast<Eigen::Index>(dim_of(target));
  const auto right = static_cast<Eigen::Index>(dim_of(num_qubits - target - 1));
  Matrix m = kron(kron(Matrix::Identity(left, left), Matrix(op)), Matrix::Identity(right, right));
  return {num_qubits, target, op, std::move(m)};
}

PureState apply(const Matrix& op, const PureState& s) {
  if (op.cols() != static_cast<Eigen::Index>(s.dim()) || op.rows() != op.cols()) {
    throw std::invalid_argument("operator dimension does not match state");
  }
  return {s.num_qubits(), op * s.amplitudes()};
}

PureState apply(const LiftedOperator& op, const PureState& s) { return apply(op.matrix(), s); }

MixedState conjugate(const Matrix& op, const MixedState& rho) {
  if (op.cols() != static_cast<Eigen::Index>(rho.dim()) || op.rows() != op.cols()) {
    throw std::invalid_argument("operator dimension does not match density operator");
  }
  return {rho.num_qubits(), op * rho.matrix() * op.adjoint()};
}

MixedState conjugate(const LiftedOperator& op, const MixedState& rho) { return conjugate(op.matrix(), rho); }

PureState tensor(const PureState& a, const PureState& b) {
  return {a.num_qubits() + b.num_qubits(), kron(a.amplitudes(), b.amplitudes())};
}

MixedState tensor(const MixedState& a, const MixedState& b) {
  return {a.num_qubits() + b.num_qubits(), kron(a.matrix(), b.matrix())};
}

MixedState partial_trace(const MixedState& rho, std::span<const int> keep) {
  const int n = rho.num_qubits();
  const auto kept = validated_subset(keep, n, "partial_trace");
  const auto traced = complement(kept, n);
  const std::size_t dk = dim_of(static_cast<int>(kept.size()));
  const std::size_t dt = dim_of(static_cast<int>(traced.size()));

  std::vector<std::size_t> kept_index(dk);
  std::vector<std::size_t> traced_index(dt);
  for (std::size_t k = 0; k < dk; ++k) kept_index[k] = scatter(k, kept, n);
  for (std::size_t t = 0; t < dt; ++t) traced_index[t] = scatter(t, traced, n);

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  const Matrix& m = rho.matrix();
  for (std::size_t i = 0; i < dk; ++i) {
    for (std::size_t j = 0; j < dk; ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t t = 0; t < dt; ++t) {
        acc += m(static_cast<Eigen::Index>(kept_index[i] | traced_index[t]),
                 static_cast<Eigen::Index>(kept_index[j] | traced_index[t]));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return {static_cast<int>(kept.size()), std::move(out)};
}

namespace {

struct ProjectionLayout {
  std::vector<std::size_t> measured_index;  // basis-state index -> register bits
  std::vector<std::size_t> rest_index;      // remaining-state index -> register bits
  int rest_qubits;
};

ProjectionLayout projection_layout(int num_qubits, const PureState& basis_state, std::span<const int> on_qubits) {
  const auto measured = validated_subset(on_qubits, num_qubits, "project");
  if (static_cast<int>(measured.size()) != basis_state.num_qubits()) {
    throw std::invalid_argument("project: basis state size does not match measured qubits");
  }
  const auto rest = complement(measured, num_qubits);
  if (rest.empty()) throw std::invalid_argument("project: no qubits left after projection");
  ProjectionLayout layout{{}, {}, static_cast<int>(rest.size())};
  for (std::size_t k = 0; k < basis_state.dim(); ++k) layout.measured_index.push_back(scatter(k, measured, num_qubits));
  for (std::size_t k = 0; k < dim_of(layout.rest_qubits); ++k) layout.rest_index.push_back(scatter(k, rest, num_qubits));
  return layout;
}

}  // namespace

PureState project(const PureState& s, const PureState& basis_state, std::span<const int> on_qubits) {
  const auto layout = projection_layout(s.num_qubits(), basis_state, on_qubits);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(layout.rest_index.size()));
  for (std::size_t c = 0; c < layout.rest_index.size(); ++c) {
    Complex acc{0.0, 0.0};
    for (std::size_t x = 0; x < layout.measured_index.size(); ++x) {
      acc += std::conj(basis_state[x]) * s[layout.measured_index[x] | layout.rest_index[c]];
    }
    out(static_cast<Eigen::Index>(c)) = acc;
  }
  return {layout.rest_qubits, std::move(out)};
}

MixedState project(const MixedState& rho, const PureState& basis_state, std::span<const int> on_qubits) {
  const auto layout = projection_layout(rho.num_qubits(), basis_state, on_qubits);
  const std::size_t dr = layout.rest_index.size();
  const std::size_t dm = layout.measured_index.size();
  const Matrix& m = rho.matrix();

  // out[c, c'] = sum_{x,x'} conj(b_x) rho[(x,c), (x',c')] b_x'
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dr), static_cast<Eigen::Index>(dr));
  for (std::size_t c = 0; c < dr; ++c) {
    for (std::size_t cp = 0; cp < dr; ++cp) {
      Complex acc{0.0, 0.0};
      for (std::size_t x = 0; x < dm; ++x) {
        const Complex bx = std::conj(basis_state[x]);
        if (bx == Complex{}) continue;
        const auto row = static_cast<Eigen::Index>(layout.measured_index[x] | layout.rest_index[c]);
        for (std::size_t xp = 0; xp < dm; ++xp) {
          const Complex bxp = basis_state[xp];
          if (bxp == Complex{}) continue;
          acc += bx * m(row, static_cast<Eigen::Index>(layout.measured_index[xp] | layout.rest_index[cp])) * bxp;
        }
      }
      out(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(cp)) = acc;
    }
  }
  return {layout.rest_qubits, std::move(out)};
}

Complex inner(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const PureState& psi, const MixedState& rho) {
  if (psi.dim() != rho.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  const Complex f = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  return f.real();
}

double fidelity(const PureState& a, const PureState& b) { return std::norm(inner(a, b)); }

bool is_unitary(const QubitOperator& op, double tol) {
  return (op.adjoint() * op - QubitOperator::Identity()).cwiseAbs().maxCoeff() <= tol;
}

bool is_diagonal(const QubitOperator& op, double tol) {
  return std::abs(op(0, 1)) <= tol && std::abs(op(1, 0)) <= tol;
}

bool is_anti_diagonal(const QubitOperator& op, double tol) {
  return std::abs(op(0, 0)) <= tol && std::abs(op(1, 1)) <= tol;
}

}  // namespace wmtele
