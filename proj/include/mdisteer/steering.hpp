#pragma once

// Assemblages, local-hidden-state (LHS) models, steering witnesses and the
// steering-robustness program.

#include <cstddef>
#include <optional>
#include <vector>

#include "mdisteer/quantum.hpp"
#include "mdisteer/sdp.hpp"

namespace mdisteer {

inline constexpr Real kAssemblageTol = 1e-9;
inline constexpr std::size_t kMaxStrategies = 1'000'000;

/// Subnormalized conditional states sigma_{a|x} on Bob's side.
class Assemblage {
 public:
  /// `members[x][a]`. Validates positivity, no-signalling and normalization
  /// to kAssemblageTol.
  explicit Assemblage(std::vector<std::vector<HermitianOperator>> members);

  std::size_t n_settings() const { return members_.size(); }
  std::size_t n_outcomes() const { return members_.front().size(); }
  Eigen::Index dim() const { return members_.front().front().dim(); }

  const HermitianOperator& operator()(std::size_t a, std::size_t x) const {
    return members_[x][a];
  }
  /// sum_a sigma_{a|x}; identical for every x.
  HermitianOperator reduced_state() const;

  /// p a + (1 - p) b.
  static Assemblage mix(Real p, const Assemblage& a, const Assemblage& b);

 private:
  std::vector<std::vector<HermitianOperator>> members_;
};

/// Response function lambda: setting x -> outcome.
class DeterministicStrategy {
 public:
  DeterministicStrategy(std::vector<std::size_t> assignment,
                        std::size_t n_outcomes);
  std::size_t operator()(std::size_t x) const { return assignment_[x]; }
  std::size_t n_settings() const { return assignment_.size(); }
  const std::vector<std::size_t>& assignment() const { return assignment_; }

 private:
  std::vector<std::size_t> assignment_;
};

/// All n_outcomes^n_settings strategies, lexicographic in (a_0, a_1, ...).
std::vector<DeterministicStrategy> enumerate_strategies(std::size_t n_settings,
                                                        std::size_t n_outcomes);

/// PSD operators F_{a|x} with local bound
/// alpha = max_lambda lambda_max(sum_x F_{lambda(x)|x}).
class SteeringWitness {
 public:
  /// `operators[x][a]`; computes the local bound.
  explicit SteeringWitness(std::vector<std::vector<HermitianOperator>> operators);
  /// As above, checking that `local_bound` matches the recomputed bound.
  SteeringWitness(std::vector<std::vector<HermitianOperator>> operators,
                  Real local_bound);

  std::size_t n_settings() const { return ops_.size(); }
  std::size_t n_outcomes() const { return ops_.front().size(); }
  Eigen::Index dim() const { return ops_.front().front().dim(); }
  const HermitianOperator& operator()(std::size_t a, std::size_t x) const {
    return ops_[x][a];
  }
  Real local_bound() const { return alpha_; }

 private:
  std::vector<std::vector<HermitianOperator>> ops_;
  Real alpha_ = 0.0;
};

/// Tr sum_{a,x} F_{a|x} sigma_{a|x}.
Real witness_value(const SteeringWitness& w, const Assemblage& asm_);

/// sigma_{a|x} = Tr_A[rho (E_{a|x} (x) 1)].
Assemblage assemblage_from_state(const State& rho, const MeasurementAssembly& m);

struct SteeringRobustnessResult {
  Real value = 0.0;
  /// omega_lambda, in enumerate_strategies order.
  std::vector<HermitianOperator> hidden_states;
  /// Block duals of the (a,x) constraints: the optimal witness.
  SteeringWitness witness;
  SdpProblem problem;
  SdpSolution solution;
};

/// minimize Tr(sum_lambda omega_lambda) - 1
/// s.t. sum_lambda D(a|x,lambda) omega_lambda >= sigma_{a|x}, omega_lambda >= 0.
SteeringRobustnessResult solve_steering_robustness(const Assemblage& asm_);
Real steering_robustness(const Assemblage& asm_);

struct LhsModel {
  std::vector<DeterministicStrategy> strategies;
  std::vector<HermitianOperator> states;
  /// max entrywise |sum_lambda D sigma_lambda - sigma_{a|x}|.
  Real residual = 0.0;
};

struct LhsMembership {
  bool member = false;
  Real robustness = 0.0;
  std::optional<LhsModel> model;
  std::optional<SteeringWitness> witness;
};

inline constexpr Real kLhsTol = 1e-7;

/// Member iff the steering robustness is at most kLhsTol. Members carry an
/// LHS decomposition accurate to kLhsTol; non-members carry a witness whose
/// value on `asm_` exceeds its local bound.
LhsMembership lhs_membership(const Assemblage& asm_);

}  // namespace mdisteer
