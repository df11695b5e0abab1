#pragma once

// Generalized entanglement and incompatibility robustness, and the chain of
// bounds relating them to the steering quantities.

#include "mdisteer/mdi.hpp"
#include "mdisteer/quantum.hpp"
#include "mdisteer/sdp.hpp"
#include "mdisteer/steering.hpp"

namespace mdisteer {

struct RobustnessResult {
  Real value = 0.0;
  SdpProblem problem;
  SdpSolution solution;
};

/// minimize Tr S - 1 s.t. S - rho >= 0, S^{T_B} >= 0. Exact only for two
/// qubits, where separability equals PPT; other dimensions are refused.
RobustnessResult solve_entanglement_robustness(const State& rho);
Real entanglement_robustness(const State& rho);

/// minimize (1/d) Tr sum G_lambda - 1
/// s.t. sum_lambda D(a|x,lambda) G_lambda >= E_{a|x}, G_lambda >= 0,
///      sum_lambda G_lambda proportional to the identity.
RobustnessResult solve_incompatibility_robustness(const MeasurementAssembly& m);
Real incompatibility_robustness(const MeasurementAssembly& m);

struct HierarchyReport {
  /// Four-outcome averaged MDI estimator from exact Bell-measurement data.
  Real s_lb = 0.0;
  Real sr = 0.0;
  Real er = 0.0;
  Real ir = 0.0;
};

/// All four quantities from (rho, m) through the assemblage and exact
/// correlations. rho must be a two-qubit state.
HierarchyReport hierarchy_report(const State& rho, const MeasurementAssembly& m,
                                 const QuantumInputs& inputs);

}  // namespace mdisteer
