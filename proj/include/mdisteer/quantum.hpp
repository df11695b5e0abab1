#pragma once

// Dense complex linear algebra and the quantum objects used by the
// measurement-device-independent steering scenario: states, POVMs,
// Bell projectors, the Werner family and the Pauli measurement/input sets.
//
// Basis convention: |0> is H, |1> is V. Bipartite operators are ordered
// A (x) B with A the slow index.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mdisteer {

using Real = double;
using Complex = std::complex<Real>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = Matrix<Complex>;
using ComplexVector = Vector<Complex>;
using RealMatrix = Matrix<Real>;
using RealVector = Vector<Real>;

/// Entrywise Hermiticity tolerance for HermitianOperator.
inline constexpr Real kHermitianTol = 1e-12;
/// Trace / positivity tolerance for states and POVMs.
inline constexpr Real kStateTol = 1e-10;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Kronecker product a (x) b. Works for any scalar type.
template <typename DerivedA, typename DerivedB>
auto tensor_product(const Eigen::MatrixBase<DerivedA>& a,
                    const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.template cast<Scalar>();
    }
  }
  return out;
}

enum class Subsystem { A, B };

/// Partial trace of an operator on H_A (x) H_B over `traced`; returns the
/// operator on the remaining factor.
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& m, Subsystem traced,
                   Eigen::Index dim_a, Eigen::Index dim_b) {
  using Scalar = typename Derived::Scalar;
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != dim_a * dim_b ||
      m.cols() != dim_a * dim_b) {
    throw DimensionError("partial_trace: operator is " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " +
                         std::to_string(dim_a * dim_b) + " square");
  }
  if (traced == Subsystem::A) {
    Matrix<Scalar> out = Matrix<Scalar>::Zero(dim_b, dim_b);
    for (Eigen::Index k = 0; k < dim_a; ++k) {
      out += m.block(k * dim_b, k * dim_b, dim_b, dim_b);
    }
    return out;
  }
  Matrix<Scalar> out(dim_a, dim_a);
  for (Eigen::Index i = 0; i < dim_a; ++i) {
    for (Eigen::Index j = 0; j < dim_a; ++j) {
      out(i, j) = m.block(i * dim_b, j * dim_b, dim_b, dim_b).trace();
    }
  }
  return out;
}

/// Partial transpose on the second factor of H_A (x) H_B.
template <typename Derived>
auto partial_transpose_b(const Eigen::MatrixBase<Derived>& m,
                         Eigen::Index dim_a, Eigen::Index dim_b) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b) {
    throw DimensionError("partial_transpose_b: dimension mismatch");
  }
  Matrix<Scalar> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < dim_a; ++i) {
    for (Eigen::Index j = 0; j < dim_a; ++j) {
      out.block(i * dim_b, j * dim_b, dim_b, dim_b) =
          m.block(i * dim_b, j * dim_b, dim_b, dim_b).transpose();
    }
  }
  return out;
}

/// Dense Hermitian operator. Construction checks Hermiticity entrywise to
/// kHermitianTol and then stores the exactly Hermitian part.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix m, Real tol = kHermitianTol);

  static HermitianOperator identity(Eigen::Index dim);
  static HermitianOperator zero(Eigen::Index dim);
  static HermitianOperator projector(const ComplexVector& ket);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Real trace() const { return m_.trace().real(); }

  HermitianOperator transpose() const;
  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(Real s) const;
  HermitianOperator& operator+=(const HermitianOperator& o);

 private:
  ComplexMatrix m_;
};

inline HermitianOperator operator*(Real s, const HermitianOperator& h) {
  return h * s;
}

/// Real part of Tr(a b).
Real trace_product(const HermitianOperator& a, const HermitianOperator& b);

/// Smallest eigenvalue. Throws if `m` is not Hermitian to kHermitianTol.
Real min_eigenvalue(const ComplexMatrix& m);
Real min_eigenvalue(const HermitianOperator& op);
Real max_eigenvalue(const HermitianOperator& op);
RealVector eigenvalues(const HermitianOperator& op);

/// Normalized density operator: unit trace, positive semidefinite.
class State {
 public:
  explicit State(HermitianOperator op);
  explicit State(const ComplexMatrix& m) : State(HermitianOperator(m)) {}
  static State pure(const ComplexVector& ket);

  Eigen::Index dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> effects);

  Eigen::Index dim() const { return effects_.front().dim(); }
  std::size_t size() const { return effects_.size(); }
  const HermitianOperator& operator[](std::size_t i) const {
    return effects_[i];
  }
  const std::vector<HermitianOperator>& effects() const { return effects_; }

 private:
  std::vector<HermitianOperator> effects_;
};

/// Alice's measurement settings {E_{a|x}}; every setting has the same number
/// of outcomes.
class MeasurementAssembly {
 public:
  explicit MeasurementAssembly(std::vector<Povm> settings);

  std::size_t n_settings() const { return settings_.size(); }
  std::size_t n_outcomes() const { return settings_.front().size(); }
  Eigen::Index dim() const { return settings_.front().dim(); }
  const Povm& operator[](std::size_t x) const { return settings_[x]; }
  const HermitianOperator& effect(std::size_t a, std::size_t x) const {
    return settings_[x][a];
  }

 private:
  std::vector<Povm> settings_;
};

// Pauli matrices.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

enum class BellState { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

/// Bell vector on C^2 (x) C^2.
ComplexVector bell_vector(BellState which);

/// Projectors onto (Phi+, Phi-, Psi+, Psi-), in that order.
Povm bell_povm();

/// Maximally entangled projector |Phi+><Phi+| on C^d (x) C^d.
HermitianOperator max_entangled_projector(Eigen::Index d);

/// v |psi-><psi-| + (1 - v) 1/4.
State werner_state(Real v);

/// Projective measurements onto the eigenbases of X, Y and Z (settings in
/// that order; outcome 0 is the +1 eigenvalue).
MeasurementAssembly pauli_mub_assembly();

/// The six Pauli eigenstates ordered +x, -x, +y, -y, +z, -z.
std::vector<State> pauli_input_states();

/// Real orthonormal-up-to-scale basis of d x d Hermitian matrices: diagonal
/// units, then (E_jk + E_kj) and i(E_jk - E_kj) for j < k.
std::vector<HermitianOperator> hermitian_basis(Eigen::Index d);

/// Real coordinates of a Hermitian operator in the Hilbert-Schmidt sense:
/// (Re diag, sqrt2 Re offdiag, sqrt2 Im offdiag). Isometric.
RealVector hermitian_to_real_vector(const HermitianOperator& op);

}  // namespace mdisteer
