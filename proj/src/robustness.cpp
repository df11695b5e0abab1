#include "mdisteer/robustness.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdisteer {

RobustnessResult solve_entanglement_robustness(const State& rho) {
  if (rho.dim() != 4) {
    throw DimensionError("entanglement_robustness: only two-qubit states are supported");
  }
  const auto basis = hermitian_basis(4);
  SdpProblem problem(basis.size());
  const auto upper = problem.add_block(rho.op() * -1.0);
  const auto ppt = problem.add_block(HermitianOperator::zero(4));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    problem.objective()(static_cast<Eigen::Index>(k)) = basis[k].trace();
    problem.set_coefficient(upper, k, basis[k]);
    problem.set_coefficient(ppt, k, HermitianOperator(ComplexMatrix(
                                        partial_transpose_b(basis[k].matrix(), 2, 2))));
  }
  SdpSolution solution = solve_certified(problem);
  const Real value = std::max(solution.primal_value - 1.0, 0.0);
  return RobustnessResult{value, std::move(problem), std::move(solution)};
}

Real entanglement_robustness(const State& rho) {
  return solve_entanglement_robustness(rho).value;
}

RobustnessResult solve_incompatibility_robustness(const MeasurementAssembly& m) {
  const auto strategies = enumerate_strategies(m.n_settings(), m.n_outcomes());
  const Eigen::Index d = m.dim();
  const auto basis = hermitian_basis(d);
  const std::size_t nb = basis.size();
  const std::size_t n_lambda = strategies.size();
  const Real inv_d = 1.0 / static_cast<Real>(d);

  SdpProblem problem(n_lambda * nb);
  for (std::size_t l = 0; l < n_lambda; ++l) {
    for (std::size_t k = 0; k < nb; ++k) {
      problem.objective()(static_cast<Eigen::Index>(l * nb + k)) = inv_d * basis[k].trace();
    }
  }
  for (std::size_t x = 0; x < m.n_settings(); ++x) {
    for (std::size_t a = 0; a < m.n_outcomes(); ++a) {
      const auto blk = problem.add_block(m.effect(a, x) * -1.0);
      for (std::size_t l = 0; l < n_lambda; ++l) {
        if (strategies[l](x) != a) continue;
        for (std::size_t k = 0; k < nb; ++k) problem.set_coefficient(blk, l * nb + k, basis[k]);
      }
    }
  }
  for (std::size_t l = 0; l < n_lambda; ++l) {
    const auto blk = problem.add_block(HermitianOperator::zero(d));
    for (std::size_t k = 0; k < nb; ++k) problem.set_coefficient(blk, l * nb + k, basis[k]);
  }
  // sum_lambda G_lambda - (1/d) Tr(sum_lambda G_lambda) 1 = 0, coordinatewise.
  const HermitianOperator id = HermitianOperator::identity(d);
  RealMatrix coords(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
  for (std::size_t k = 0; k < nb; ++k) {
    coords.col(static_cast<Eigen::Index>(k)) =
        hermitian_to_real_vector(basis[k] - id * (inv_d * basis[k].trace()));
  }
  for (Eigen::Index r = 0; r < coords.rows(); ++r) {
    if (coords.row(r).cwiseAbs().maxCoeff() == 0.0) continue;
    RealVector row = RealVector::Zero(static_cast<Eigen::Index>(problem.n_vars()));
    for (std::size_t l = 0; l < n_lambda; ++l) {
      row.segment(static_cast<Eigen::Index>(l * nb), static_cast<Eigen::Index>(nb)) =
          coords.row(r).transpose();
    }
    problem.add_equality(row, 0.0);
  }

  SdpSolution solution = solve_certified(problem);
  const Real value = std::max(solution.primal_value - 1.0, 0.0);
  return RobustnessResult{value, std::move(problem), std::move(solution)};
}

Real incompatibility_robustness(const MeasurementAssembly& m) {
  return solve_incompatibility_robustness(m).value;
}

HierarchyReport hierarchy_report(const State& rho, const MeasurementAssembly& m,
                                 const QuantumInputs& inputs) {
  const Assemblage asm_ = assemblage_from_state(rho, m);
  if (asm_.dim() != 2 || inputs.dim() != 2) {
    throw DimensionError("hierarchy_report: Bell-state measurement needs qubit inputs on qubit data");
  }
  HierarchyReport r;
  r.s_lb = mdi_sm_avg(correlations(asm_, inputs, bell_povm()), inputs).value;
  r.sr = steering_robustness(asm_);
  r.er = entanglement_robustness(rho);
  r.ir = incompatibility_robustness(m);
  return r;
}

}  // namespace mdisteer
