#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mdisteer/quantum.hpp"
#include "test_util.hpp"

using namespace mdisteer;

namespace {

ComplexMatrix diag(std::initializer_list<Real> d) {
  RealVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (Real x : d) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

ComplexMatrix ket0_projector() { return diag({1, 0}); }

}  // namespace

TEST(TensorProduct, IdentityTimesIdentity) {
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  EXPECT_TRUE(tensor_product(id2, id2).isApprox(ComplexMatrix::Identity(4, 4)));
}

TEST(TensorProduct, DiagonalCase) {
  const ComplexMatrix r = tensor_product(pauli_z(), ket0_projector());
  EXPECT_TRUE(r.isApprox(diag({1, 0, -1, 0})));
}

TEST(TensorProduct, XXExpectationOnPhiPlus) {
  // X (x) X written out: anti-diagonal ones.
  ComplexMatrix xx = ComplexMatrix::Zero(4, 4);
  xx(0, 3) = xx(1, 2) = xx(2, 1) = xx(3, 0) = 1.0;
  const ComplexMatrix r = tensor_product(pauli_x(), pauli_x());
  EXPECT_TRUE(r.isApprox(xx));
  const ComplexVector phi = bell_vector(BellState::PhiPlus);
  EXPECT_NEAR((phi.adjoint() * r * phi)(0, 0).real(), 1.0, 1e-15);
}

TEST(TensorProduct, RealScalarsWork) {
  RealMatrix a(1, 2);
  a << 1, 2;
  RealMatrix b(2, 1);
  b << 3, 4;
  RealMatrix expected(2, 2);
  expected << 3, 6, 4, 8;
  EXPECT_TRUE(tensor_product(a, b).isApprox(expected));
}

TEST(PartialTrace, ProductStateFactorizes) {
  std::mt19937_64 rng(1);
  const auto rho = testgen::random_state(2, rng);
  const auto sigma = testgen::random_state(3, rng);
  const ComplexMatrix prod = tensor_product(rho.matrix(), sigma.matrix());
  EXPECT_TRUE(partial_trace(prod, Subsystem::A, 2, 3).isApprox(sigma.matrix(), 1e-12));
  EXPECT_TRUE(partial_trace(prod, Subsystem::B, 2, 3).isApprox(rho.matrix(), 1e-12));
}

TEST(PartialTrace, SingletMarginalIsMaximallyMixed) {
  const ComplexVector psi = bell_vector(BellState::PsiMinus);
  const ComplexMatrix r = partial_trace(ComplexMatrix(psi * psi.adjoint()), Subsystem::A, 2, 2);
  EXPECT_TRUE(r.isApprox(0.5 * ComplexMatrix::Identity(2, 2)));
}

TEST(PartialTrace, IndexSummation) {
  // Tr_B diag(1,2,3,4)/10: (1+2, 3+4)/10.
  const ComplexMatrix r = partial_trace(ComplexMatrix(diag({1, 2, 3, 4}) / 10.0), Subsystem::B, 2, 2);
  EXPECT_TRUE(r.isApprox(diag({0.3, 0.7})));
}

TEST(PartialTrace, DimensionMismatchThrows) {
  EXPECT_THROW(partial_trace(ComplexMatrix::Identity(4, 4), Subsystem::A, 2, 3),
               DimensionError);
}

TEST(MinEigenvalue, Examples) {
  EXPECT_NEAR(min_eigenvalue(HermitianOperator::identity(2)), 1.0, 1e-14);
  EXPECT_NEAR(min_eigenvalue(ComplexMatrix(diag({3, -2}))), -2.0, 1e-14);
  EXPECT_NEAR(min_eigenvalue(HermitianOperator::projector(bell_vector(BellState::PsiMinus))),
              0.0, 1e-14);
}

TEST(MinEigenvalue, RejectsNonHermitian) {
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  EXPECT_THROW(min_eigenvalue(m), std::invalid_argument);
}

TEST(BellPovm, CompletenessAndProjectors) {
  const Povm bsm = bell_povm();
  ASSERT_EQ(bsm.size(), 4u);
  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  for (const auto& e : bsm.effects()) {
    sum += e.matrix();
    EXPECT_TRUE((e.matrix() * e.matrix()).isApprox(e.matrix()));
    EXPECT_NEAR(e.trace(), 1.0, 1e-15);
  }
  EXPECT_TRUE(sum.isApprox(ComplexMatrix::Identity(4, 4)));
}

TEST(BellPovm, FirstEffectIsPhiPlus) {
  const Povm bsm = bell_povm();
  const ComplexMatrix& e1 = bsm[0].matrix();
  const ComplexVector phi = bell_vector(BellState::PhiPlus);
  const ComplexVector psi = bell_vector(BellState::PsiMinus);
  EXPECT_NEAR((phi.adjoint() * e1 * phi)(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs((psi.adjoint() * e1 * psi)(0, 0)), 0.0, 1e-15);
  EXPECT_TRUE(e1.isApprox(max_entangled_projector(2).matrix()));
}

TEST(Werner, Endpoints) {
  EXPECT_TRUE(werner_state(0.0).matrix().isApprox(0.25 * ComplexMatrix::Identity(4, 4)));
  // (|HV> - |VH>)/sqrt2 with H = |0>, V = |1>.
  ComplexVector singlet = ComplexVector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  EXPECT_TRUE(werner_state(1.0).matrix().isApprox(singlet * singlet.adjoint()));
}

TEST(Werner, HalfVisibilitySpectrum) {
  RealVector ev = eigenvalues(werner_state(0.5).op());
  std::sort(ev.data(), ev.data() + ev.size());
  EXPECT_NEAR(ev(0), 0.125, 1e-14);
  EXPECT_NEAR(ev(1), 0.125, 1e-14);
  EXPECT_NEAR(ev(2), 0.125, 1e-14);
  EXPECT_NEAR(ev(3), 0.625, 1e-14);
}

TEST(Werner, RejectsOutOfRange) {
  EXPECT_THROW(werner_state(-0.1), std::domain_error);
  EXPECT_THROW(werner_state(1.1), std::domain_error);
}

TEST(PauliMub, Structure) {
  const auto m = pauli_mub_assembly();
  ASSERT_EQ(m.n_settings(), 3u);
  ASSERT_EQ(m.n_outcomes(), 2u);
  EXPECT_TRUE(m.effect(0, 2).matrix().isApprox(ket0_projector()));
  for (std::size_t x = 0; x < 3; ++x) {
    EXPECT_TRUE((m.effect(0, x).matrix() + m.effect(1, x).matrix())
                    .isApprox(ComplexMatrix::Identity(2, 2)));
  }
  EXPECT_NEAR(trace_product(m.effect(0, 0), m.effect(0, 2)), 0.5, 1e-15);
  EXPECT_NEAR(trace_product(m.effect(0, 1), m.effect(1, 0)), 0.5, 1e-15);
}

TEST(PauliInputs, Structure) {
  const auto states = pauli_input_states();
  ASSERT_EQ(states.size(), 6u);
  ComplexMatrix avg = ComplexMatrix::Zero(2, 2);
  RealMatrix vec(6, 4);
  for (std::size_t y = 0; y < states.size(); ++y) {
    EXPECT_NEAR(states[y].op().trace(), 1.0, 1e-15);
    const RealVector ev = eigenvalues(states[y].op());
    EXPECT_NEAR(ev.maxCoeff(), 1.0, 1e-14);
    EXPECT_NEAR(ev.minCoeff(), 0.0, 1e-14);
    avg += states[y].matrix() / 6.0;
    vec.row(static_cast<Eigen::Index>(y)) = hermitian_to_real_vector(states[y].op()).transpose();
  }
  EXPECT_TRUE(avg.isApprox(0.5 * ComplexMatrix::Identity(2, 2)));
  Eigen::FullPivLU<RealMatrix> lu(vec);
  EXPECT_EQ(lu.rank(), 4);
}

TEST(HermitianBasis, SpansAndVectorizes) {
  const auto basis = hermitian_basis(3);
  ASSERT_EQ(basis.size(), 9u);
  RealMatrix vecs(9, 9);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    vecs.col(static_cast<Eigen::Index>(i)) = hermitian_to_real_vector(basis[i]);
  }
  Eigen::FullPivLU<RealMatrix> lu(vecs);
  EXPECT_EQ(lu.rank(), 9);
}

TEST(Validation, StateAndPovmInvariants) {
  EXPECT_THROW(State(ComplexMatrix(diag({0.5, 0.4}))), std::invalid_argument);
  EXPECT_THROW(State(ComplexMatrix(diag({1.5, -0.5}))), std::invalid_argument);
  EXPECT_THROW(Povm({HermitianOperator(ComplexMatrix(diag({1, 0})))}), std::invalid_argument);
  EXPECT_THROW(MeasurementAssembly({bell_povm(), pauli_mub_assembly()[0]}),
               std::invalid_argument);
}

// --- properties -------------------------------------------------------------

TEST(Properties, TensorAssociativeAndTraceMultiplicative) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = testgen::ginibre(2, 2, rng);
    const ComplexMatrix b = testgen::ginibre(3, 3, rng);
    const ComplexMatrix c = testgen::ginibre(2, 2, rng);
    const ComplexMatrix left = tensor_product(tensor_product(a, b), c);
    const ComplexMatrix right = tensor_product(a, tensor_product(b, c));
    EXPECT_LT((left - right).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(std::abs(tensor_product(a, b).trace() - a.trace() * b.trace()), 1e-12);
  }
}

TEST(Properties, PartialTraceInvertsTensor) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = testgen::ginibre(2, 2, rng);
    const ComplexMatrix b = testgen::ginibre(3, 3, rng);
    const ComplexMatrix ab = tensor_product(a, b);
    EXPECT_LT((partial_trace(ab, Subsystem::A, 2, 3) - a.trace() * b).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((partial_trace(ab, Subsystem::B, 2, 3) - b.trace() * a).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Properties, MinEigenvalueUnitarilyInvariant) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<Real> u(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    RealVector d(4);
    for (int i = 0; i < 4; ++i) d(i) = u(rng);
    const ComplexMatrix uni = testgen::random_unitary(4, rng);
    const ComplexMatrix m = uni * d.cast<Complex>().asDiagonal() * uni.adjoint();
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    EXPECT_NEAR(min_eigenvalue(h), d.minCoeff(), 1e-9);
  }
}

TEST(Properties, WernerIsAState) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<Real> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const State w = werner_state(u(rng));
    EXPECT_NEAR(w.op().trace(), 1.0, 1e-12);
    EXPECT_GE(min_eigenvalue(w.op()), -1e-12);
  }
}
