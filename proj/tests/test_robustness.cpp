#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mdisteer/robustness.hpp"
#include "test_util.hpp"

using namespace mdisteer;

namespace {

const Real kSqrt2 = std::sqrt(2.0);
const Real kSqrt3 = std::sqrt(3.0);

MeasurementAssembly pauli_subset(std::initializer_list<std::size_t> xs) {
  const auto all = pauli_mub_assembly();
  std::vector<Povm> s;
  for (auto x : xs) s.push_back(all[x]);
  return MeasurementAssembly(std::move(s));
}

}  // namespace

TEST(EntanglementRobustness, Examples) {
  std::mt19937_64 rng(41);
  const State prod(ComplexMatrix(tensor_product(testgen::random_state(2, rng).matrix(),
                                                testgen::random_state(2, rng).matrix())));
  EXPECT_NEAR(entanglement_robustness(prod), 0.0, 1e-7);
  const auto singlet = solve_entanglement_robustness(werner_state(1.0));
  EXPECT_NEAR(singlet.value, 1.0, 1e-7);
  EXPECT_TRUE(verify_certificate(singlet.problem, singlet.solution));
  EXPECT_NEAR(entanglement_robustness(werner_state(1.0 / 3.0)), 0.0, 1e-7);
}

TEST(EntanglementRobustness, WernerCurve) {
  // (3v - 1)/2 above the PPT boundary.
  for (Real v : {0.2, 0.5, 0.75, 0.9}) {
    EXPECT_NEAR(entanglement_robustness(werner_state(v)), std::max((3 * v - 1) / 2, 0.0), 1e-7) << v;
  }
}

TEST(EntanglementRobustness, RefusesLargerDimensions) {
  EXPECT_THROW(entanglement_robustness(State(ComplexMatrix(ComplexMatrix::Identity(9, 9) / 9.0))),
               DimensionError);
}

TEST(IncompatibilityRobustness, SingleSettingIsZero) {
  EXPECT_NEAR(incompatibility_robustness(pauli_subset({2})), 0.0, 1e-7);
}

TEST(IncompatibilityRobustness, TwoPaulis) {
  // Parent G_{ab} = (s/4)(1 + (aX + bZ)/sqrt2), s = 2/(1 + 1/sqrt2), gives
  // 3 - 2 sqrt2; the singlet steering witness gives the same lower bound.
  const auto r = solve_incompatibility_robustness(pauli_subset({0, 2}));
  EXPECT_TRUE(verify_certificate(r.problem, r.solution));
  EXPECT_NEAR(r.value, 3.0 - 2.0 * kSqrt2, 1e-7);
}

TEST(IncompatibilityRobustness, ThreePaulis) {
  const Real ir = incompatibility_robustness(pauli_mub_assembly());
  EXPECT_NEAR(ir, 2.0 - kSqrt3, 1e-7);
  const Real sr = steering_robustness(assemblage_from_state(werner_state(1.0), pauli_mub_assembly()));
  EXPECT_LE(sr, ir + 1e-6);
}

TEST(Hierarchy, Examples) {
  const auto inputs = QuantumInputs(pauli_input_states());
  const auto top = hierarchy_report(werner_state(1.0), pauli_mub_assembly(), inputs);
  EXPECT_NEAR(top.s_lb, top.sr, 1e-6);
  EXPECT_NEAR(top.sr, 2.0 - kSqrt3, 1e-6);
  EXPECT_NEAR(top.er, 1.0, 1e-6);
  EXPECT_NEAR(top.ir, top.sr, 1e-6);

  const auto half = hierarchy_report(werner_state(0.5), pauli_mub_assembly(), inputs);
  EXPECT_LE(half.s_lb, 1e-7);
  EXPECT_LE(half.sr, 1e-7);
  EXPECT_NEAR(half.er, 0.25, 1e-6);
  EXPECT_NEAR(half.ir, 2.0 - kSqrt3, 1e-6);

  std::mt19937_64 rng(42);
  const State prod(ComplexMatrix(tensor_product(testgen::random_state(2, rng).matrix(),
                                                testgen::random_state(2, rng).matrix())));
  const auto p = hierarchy_report(prod, pauli_mub_assembly(), inputs);
  EXPECT_LE(p.s_lb, 1e-7);
  EXPECT_LE(p.sr, 1e-7);
  EXPECT_LE(p.er, 1e-7);
}

// --- properties -------------------------------------------------------------

TEST(Properties, SteeringBelowEntanglementAndIncompatibility) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const State rho = testgen::random_state(4, rng, 1 + trial % 4);
    const auto m = testgen::random_projective_assembly(2 + trial % 2, 2, rng);
    const Real sr = steering_robustness(assemblage_from_state(rho, m));
    EXPECT_LE(sr, entanglement_robustness(rho) + 1e-6) << trial;
    EXPECT_LE(sr, incompatibility_robustness(m) + 1e-6) << trial;
  }
}

TEST(Properties, WernerEntanglementMonotone) {
  Real prev = 1e9;
  for (int i = 20; i >= 0; --i) {
    const Real v = i / 20.0;
    const Real er = entanglement_robustness(werner_state(v));
    EXPECT_LE(er, prev + 1e-7);
    if (v <= 1.0 / 3.0) EXPECT_LE(er, 1e-7);
    prev = er;
  }
}
