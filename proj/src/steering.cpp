#include "mdisteer/steering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mdisteer {

namespace {

template <class T>
void check_rectangular(const std::vector<std::vector<T>>& ops, const char* what) {
  if (ops.empty() || ops.front().empty()) {
    throw std::invalid_argument(std::string(what) + ": need at least one setting and outcome");
  }
  const auto n_out = ops.front().size();
  const auto d = ops.front().front().dim();
  for (const auto& setting : ops) {
    if (setting.size() != n_out) {
      throw std::invalid_argument(std::string(what) + ": settings have different outcome counts");
    }
    for (const auto& op : setting) {
      if (op.dim() != d) throw DimensionError(std::string(what) + ": mixed operator dimensions");
    }
  }
}

}  // namespace

Assemblage::Assemblage(std::vector<std::vector<HermitianOperator>> members)
    : members_(std::move(members)) {
  check_rectangular(members_, "assemblage");
  const HermitianOperator reduced = reduced_state();
  if (std::abs(reduced.trace() - 1.0) > kAssemblageTol) {
    throw std::invalid_argument("assemblage: reduced state does not have unit trace");
  }
  for (const auto& setting : members_) {
    HermitianOperator sum = HermitianOperator::zero(dim());
    for (const auto& s : setting) {
      if (min_eigenvalue(s) < -kAssemblageTol) {
        throw std::invalid_argument("assemblage: member is not positive semidefinite");
      }
      sum += s;
    }
    if ((sum.matrix() - reduced.matrix()).cwiseAbs().maxCoeff() > kAssemblageTol) {
      throw std::invalid_argument("assemblage: marginal depends on the setting");
    }
  }
}

HermitianOperator Assemblage::reduced_state() const {
  HermitianOperator sum = HermitianOperator::zero(dim());
  for (const auto& s : members_.front()) sum += s;
  return sum;
}

Assemblage Assemblage::mix(Real p, const Assemblage& a, const Assemblage& b) {
  if (p < 0.0 || p > 1.0) throw std::domain_error("assemblage mix: weight outside [0, 1]");
  if (a.n_settings() != b.n_settings() || a.n_outcomes() != b.n_outcomes() ||
      a.dim() != b.dim()) {
    throw DimensionError("assemblage mix: shapes differ");
  }
  std::vector<std::vector<HermitianOperator>> m(a.n_settings());
  for (std::size_t x = 0; x < a.n_settings(); ++x) {
    for (std::size_t o = 0; o < a.n_outcomes(); ++o) {
      m[x].push_back(p * a(o, x) + (1.0 - p) * b(o, x));
    }
  }
  return Assemblage(std::move(m));
}

DeterministicStrategy::DeterministicStrategy(std::vector<std::size_t> assignment,
                                             std::size_t n_outcomes)
    : assignment_(std::move(assignment)) {
  for (auto a : assignment_) {
    if (a >= n_outcomes) throw std::invalid_argument("strategy: outcome out of range");
  }
}

std::vector<DeterministicStrategy> enumerate_strategies(std::size_t n_settings,
                                                        std::size_t n_outcomes) {
  if (n_settings == 0 || n_outcomes == 0) {
    throw std::invalid_argument("enumerate_strategies: empty alphabet");
  }
  std::size_t count = 1;
  for (std::size_t x = 0; x < n_settings; ++x) {
    if (count > kMaxStrategies / n_outcomes) {
      throw std::length_error("enumerate_strategies: more than 10^6 strategies");
    }
    count *= n_outcomes;
  }
  std::vector<DeterministicStrategy> out;
  out.reserve(count);
  std::vector<std::size_t> digits(n_settings, 0);
  for (std::size_t k = 0; k < count; ++k) {
    out.emplace_back(digits, n_outcomes);
    // Increment with the last setting as the fastest digit.
    for (std::size_t x = n_settings; x-- > 0;) {
      if (++digits[x] < n_outcomes) break;
      digits[x] = 0;
    }
  }
  return out;
}

SteeringWitness::SteeringWitness(std::vector<std::vector<HermitianOperator>> operators)
    : ops_(std::move(operators)) {
  check_rectangular(ops_, "witness");
  for (const auto& setting : ops_) {
    for (const auto& f : setting) {
      if (min_eigenvalue(f) < -kAssemblageTol) {
        throw std::invalid_argument("witness: operator is not positive semidefinite");
      }
    }
  }
  alpha_ = -std::numeric_limits<Real>::infinity();
  for (const auto& lambda : enumerate_strategies(n_settings(), n_outcomes())) {
    HermitianOperator sum = HermitianOperator::zero(dim());
    for (std::size_t x = 0; x < n_settings(); ++x) sum += ops_[x][lambda(x)];
    alpha_ = std::max(alpha_, max_eigenvalue(sum));
  }
}

SteeringWitness::SteeringWitness(std::vector<std::vector<HermitianOperator>> operators,
                                 Real local_bound)
    : SteeringWitness(std::move(operators)) {
  if (std::abs(local_bound - alpha_) > 1e-9 * std::max(1.0, std::abs(alpha_))) {
    throw std::invalid_argument("witness: stated local bound " + std::to_string(local_bound) +
                                " differs from recomputed " + std::to_string(alpha_));
  }
}

Real witness_value(const SteeringWitness& w, const Assemblage& asm_) {
  if (w.n_settings() != asm_.n_settings() || w.n_outcomes() != asm_.n_outcomes() ||
      w.dim() != asm_.dim()) {
    throw DimensionError("witness_value: witness and assemblage shapes differ");
  }
  Real total = 0.0;
  for (std::size_t x = 0; x < asm_.n_settings(); ++x) {
    for (std::size_t a = 0; a < asm_.n_outcomes(); ++a) total += trace_product(w(a, x), asm_(a, x));
  }
  return total;
}

Assemblage assemblage_from_state(const State& rho, const MeasurementAssembly& m) {
  const Eigen::Index da = m.dim();
  if (da <= 0 || rho.dim() % da != 0) {
    throw DimensionError("assemblage_from_state: state dimension is not a multiple of Alice's");
  }
  const Eigen::Index db = rho.dim() / da;
  const ComplexMatrix id_b = ComplexMatrix::Identity(db, db);
  std::vector<std::vector<HermitianOperator>> members(m.n_settings());
  for (std::size_t x = 0; x < m.n_settings(); ++x) {
    for (std::size_t a = 0; a < m.n_outcomes(); ++a) {
      const ComplexMatrix prod = rho.matrix() * tensor_product(m.effect(a, x).matrix(), id_b);
      const ComplexMatrix sigma = partial_trace(prod, Subsystem::A, da, db);
      members[x].emplace_back(ComplexMatrix(0.5 * (sigma + sigma.adjoint())), 1e-9);
    }
  }
  return Assemblage(std::move(members));
}

SteeringRobustnessResult solve_steering_robustness(const Assemblage& asm_) {
  const auto strategies = enumerate_strategies(asm_.n_settings(), asm_.n_outcomes());
  const Eigen::Index d = asm_.dim();
  const auto basis = hermitian_basis(d);
  const std::size_t nb = basis.size();
  const std::size_t n_lambda = strategies.size();

  // omega_lambda = sum_k x[lambda * nb + k] basis[k].
  SdpProblem problem(n_lambda * nb);
  for (std::size_t l = 0; l < n_lambda; ++l) {
    for (std::size_t k = 0; k < nb; ++k) problem.objective()(static_cast<Eigen::Index>(l * nb + k)) = basis[k].trace();
  }
  for (std::size_t x = 0; x < asm_.n_settings(); ++x) {
    for (std::size_t a = 0; a < asm_.n_outcomes(); ++a) {
      const auto blk = problem.add_block(asm_(a, x) * -1.0);
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

  SdpSolution solution = solve_certified(problem);

  std::vector<HermitianOperator> hidden;
  for (std::size_t l = 0; l < n_lambda; ++l) {
    HermitianOperator w = HermitianOperator::zero(d);
    for (std::size_t k = 0; k < nb; ++k) {
      w += basis[k] * solution.x(static_cast<Eigen::Index>(l * nb + k));
    }
    hidden.push_back(w);
  }
  std::vector<std::vector<HermitianOperator>> f(asm_.n_settings());
  std::size_t blk = 0;
  for (std::size_t x = 0; x < asm_.n_settings(); ++x) {
    for (std::size_t a = 0; a < asm_.n_outcomes(); ++a) {
      // Clip the tiny negative eigenvalues an interior-point dual can carry.
      const HermitianOperator& z = solution.block_duals[blk++];
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(z.matrix());
      const RealVector ev = es.eigenvalues().cwiseMax(0.0);
      f[x].emplace_back(ComplexMatrix(es.eigenvectors() * ev.cast<Complex>().asDiagonal() *
                                      es.eigenvectors().adjoint()),
                        1e-9);
    }
  }
  const Real value = std::max(solution.primal_value - 1.0, 0.0);
  return SteeringRobustnessResult{value, std::move(hidden), SteeringWitness(std::move(f)),
                                  std::move(problem), std::move(solution)};
}

Real steering_robustness(const Assemblage& asm_) {
  return solve_steering_robustness(asm_).value;
}

LhsMembership lhs_membership(const Assemblage& asm_) {
  auto sr = solve_steering_robustness(asm_);
  LhsMembership out;
  out.robustness = sr.value;
  if (sr.value > kLhsTol) {
    out.member = false;
    out.witness = std::move(sr.witness);
    return out;
  }
  out.member = true;
  LhsModel model;
  model.strategies = enumerate_strategies(asm_.n_settings(), asm_.n_outcomes());
  // Rescale to unit total trace; the slack in each constraint is at most the
  // robustness value.
  const Real total = 1.0 + std::max(sr.solution.primal_value - 1.0, 0.0);
  for (const auto& w : sr.hidden_states) model.states.push_back(w * (1.0 / total));
  Real residual = 0.0;
  for (std::size_t x = 0; x < asm_.n_settings(); ++x) {
    for (std::size_t a = 0; a < asm_.n_outcomes(); ++a) {
      ComplexMatrix sum = ComplexMatrix::Zero(asm_.dim(), asm_.dim());
      for (std::size_t l = 0; l < model.strategies.size(); ++l) {
        if (model.strategies[l](x) == a) sum += model.states[l].matrix();
      }
      residual = std::max(residual, (sum - asm_(a, x).matrix()).cwiseAbs().maxCoeff());
    }
  }
  model.residual = residual;
  out.model = std::move(model);
  return out;
}

}  // namespace mdisteer
