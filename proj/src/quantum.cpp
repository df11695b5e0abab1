#include "mdisteer/quantum.hpp"

#include <cmath>

namespace mdisteer {

namespace {

Real hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix m, Real tol) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionError("HermitianOperator: matrix must be square and nonempty");
  }
  if (hermiticity_defect(m) > tol) {
    throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
  return HermitianOperator(ComplexMatrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::projector(const ComplexVector& ket) {
  return HermitianOperator(ket * ket.adjoint());
}

HermitianOperator HermitianOperator::transpose() const {
  return HermitianOperator(ComplexMatrix(m_.transpose()));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (o.dim() != dim()) throw DimensionError("HermitianOperator: dim mismatch");
  HermitianOperator r;
  r.m_ = m_ + o.m_;
  return r;
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (o.dim() != dim()) throw DimensionError("HermitianOperator: dim mismatch");
  HermitianOperator r;
  r.m_ = m_ - o.m_;
  return r;
}

HermitianOperator HermitianOperator::operator*(Real s) const {
  HermitianOperator r;
  r.m_ = m_ * s;
  return r;
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  if (o.dim() != dim()) throw DimensionError("HermitianOperator: dim mismatch");
  m_ += o.m_;
  return *this;
}

Real trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace_product: dim mismatch");
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().array().conjugate()).sum().real();
}

Real min_eigenvalue(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionError("min_eigenvalue: matrix must be square");
  }
  if (hermiticity_defect(m) > kHermitianTol) {
    throw std::invalid_argument("min_eigenvalue: matrix is not Hermitian");
  }
  return min_eigenvalue(HermitianOperator(m));
}

RealVector eigenvalues(const HermitianOperator& op) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(op.matrix(),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Real min_eigenvalue(const HermitianOperator& op) {
  return eigenvalues(op).minCoeff();
}

Real max_eigenvalue(const HermitianOperator& op) {
  return eigenvalues(op).maxCoeff();
}

State::State(HermitianOperator op) : op_(std::move(op)) {
  if (std::abs(op_.trace() - 1.0) > kStateTol) {
    throw std::invalid_argument("State: trace is not 1");
  }
  if (min_eigenvalue(op_) < -kStateTol) {
    throw std::invalid_argument("State: operator is not positive semidefinite");
  }
}

State State::pure(const ComplexVector& ket) {
  return State(HermitianOperator::projector(ket / ket.norm()));
}

Povm::Povm(std::vector<HermitianOperator> effects)
    : effects_(std::move(effects)) {
  if (effects_.empty()) throw std::invalid_argument("Povm: no effects");
  const auto d = effects_.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& e : effects_) {
    if (e.dim() != d) throw DimensionError("Povm: effects differ in dimension");
    if (min_eigenvalue(e) < -kStateTol) {
      throw std::invalid_argument("Povm: effect is not positive semidefinite");
    }
    sum += e.matrix();
  }
  if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kStateTol) {
    throw std::invalid_argument("Povm: effects do not sum to identity");
  }
}

MeasurementAssembly::MeasurementAssembly(std::vector<Povm> settings)
    : settings_(std::move(settings)) {
  if (settings_.empty()) {
    throw std::invalid_argument("MeasurementAssembly: no settings");
  }
  for (const auto& s : settings_) {
    if (s.size() != settings_.front().size()) {
      throw std::invalid_argument(
          "MeasurementAssembly: settings differ in outcome count");
    }
    if (s.dim() != settings_.front().dim()) {
      throw DimensionError("MeasurementAssembly: settings differ in dimension");
    }
  }
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  const Complex i(0, 1);
  ComplexMatrix m(2, 2);
  m << 0, -i, i, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexVector bell_vector(BellState which) {
  const Real s = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  switch (which) {
    case BellState::PhiPlus:
      v(0) = s;
      v(3) = s;
      break;
    case BellState::PhiMinus:
      v(0) = s;
      v(3) = -s;
      break;
    case BellState::PsiPlus:
      v(1) = s;
      v(2) = s;
      break;
    case BellState::PsiMinus:
      v(1) = s;
      v(2) = -s;
      break;
  }
  return v;
}

Povm bell_povm() {
  std::vector<HermitianOperator> effects;
  for (auto b : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus,
                 BellState::PsiMinus}) {
    effects.push_back(HermitianOperator::projector(bell_vector(b)));
  }
  return Povm(std::move(effects));
}

HermitianOperator max_entangled_projector(Eigen::Index d) {
  ComplexVector v = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return HermitianOperator::projector(v / std::sqrt(static_cast<Real>(d)));
}

State werner_state(Real v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("werner_state: visibility must lie in [0, 1]");
  }
  const ComplexVector psi = bell_vector(BellState::PsiMinus);
  ComplexMatrix rho = v * psi * psi.adjoint() +
                      ((1.0 - v) / 4.0) * ComplexMatrix::Identity(4, 4);
  return State(HermitianOperator(std::move(rho)));
}

namespace {

Povm eigen_projectors(const ComplexMatrix& pauli) {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  return Povm({HermitianOperator(ComplexMatrix((id + pauli) * 0.5)),
               HermitianOperator(ComplexMatrix((id - pauli) * 0.5))});
}

}  // namespace

MeasurementAssembly pauli_mub_assembly() {
  return MeasurementAssembly({eigen_projectors(pauli_x()),
                              eigen_projectors(pauli_y()),
                              eigen_projectors(pauli_z())});
}

std::vector<State> pauli_input_states() {
  std::vector<State> out;
  for (const auto& s : {pauli_x(), pauli_y(), pauli_z()}) {
    const Povm p = eigen_projectors(s);
    out.emplace_back(p[0]);
    out.emplace_back(p[1]);
  }
  return out;
}

std::vector<HermitianOperator> hermitian_basis(Eigen::Index d) {
  std::vector<HermitianOperator> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index j = 0; j < d; ++j) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(j, j) = 1.0;
    basis.emplace_back(std::move(m));
  }
  const Complex i(0, 1);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      ComplexMatrix re = ComplexMatrix::Zero(d, d);
      re(j, k) = 1.0;
      re(k, j) = 1.0;
      basis.emplace_back(std::move(re));
      ComplexMatrix im = ComplexMatrix::Zero(d, d);
      im(j, k) = i;
      im(k, j) = -i;
      basis.emplace_back(std::move(im));
    }
  }
  return basis;
}

RealVector hermitian_to_real_vector(const HermitianOperator& op) {
  const auto d = op.dim();
  RealVector v(d * d);
  Eigen::Index n = 0;
  for (Eigen::Index j = 0; j < d; ++j) v(n++) = op.matrix()(j, j).real();
  const Real r2 = std::sqrt(2.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      v(n++) = r2 * op.matrix()(j, k).real();
      v(n++) = r2 * op.matrix()(j, k).imag();
    }
  }
  return v;
}

}  // namespace mdisteer
