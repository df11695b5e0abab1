#pragma once

// Measurement-device-independent steering: correlations generated with
// trusted quantum inputs on Bob's side, payoffs, the lower-bound program for
// the measure and the noise models applied to observed statistics.

#include <array>
#include <cstddef>
#include <vector>

#include "mdisteer/quantum.hpp"
#include "mdisteer/sdp.hpp"
#include "mdisteer/steering.hpp"

namespace mdisteer {

inline constexpr Real kProbabilityClamp = 1e-12;
inline constexpr Real kNormalizationTol = 1e-9;
inline constexpr Real kCompletenessTol = 1e-9;

/// Trusted input states tau_y on Bob's auxiliary system B0.
class QuantumInputs {
 public:
  explicit QuantumInputs(std::vector<State> states);

  std::size_t size() const { return states_.size(); }
  Eigen::Index dim() const { return states_.front().dim(); }
  const State& operator[](std::size_t y) const { return states_[y]; }
  const std::vector<State>& states() const { return states_; }
  /// The states span the real space of dim x dim Hermitian operators.
  bool complete() const { return complete_; }

  /// Columns k with sum_y k_y tau_y = 0 (orthonormal basis of the kernel).
  const RealMatrix& kernel() const { return kernel_; }

 private:
  std::vector<State> states_;
  RealMatrix kernel_;
  bool complete_ = false;
};

bool completeness_check(const QuantumInputs& inputs);

/// Shape (|A|, |B|, |X|, |Y|) shared by correlation and coefficient tensors.
struct TensorDims {
  std::size_t a = 0, b = 0, x = 0, y = 0;
  std::size_t size() const { return a * b * x * y; }
  bool operator==(const TensorDims&) const = default;
};

/// Dense real tensor indexed (a, b, x, y).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(TensorDims dims);
  Tensor4(TensorDims dims, std::vector<Real> values);

  const TensorDims& dims() const { return dims_; }
  Real& operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
    return values_[index(a, b, x, y)];
  }
  Real operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    return values_[index(a, b, x, y)];
  }
  const std::vector<Real>& values() const { return values_; }

 protected:
  std::size_t index(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    return ((a * dims_.b + b) * dims_.x + x) * dims_.y + y;
  }
  TensorDims dims_;
  std::vector<Real> values_;
};

/// Observed statistics p(a, b | x, y). Entries in [-1e-12, 0) are clamped
/// to zero; anything more negative is rejected.
class CorrelationTensor : public Tensor4 {
 public:
  CorrelationTensor(TensorDims dims, std::vector<Real> values, bool lossless);

  bool lossless() const { return lossless_; }
  /// sum_{a,b} p(a, b | x, y).
  Real total(std::size_t x, std::size_t y) const;

 private:
  bool lossless_ = false;
};

/// Real coefficients beta^{x,y}_{a,b}.
class WitnessCoefficients : public Tensor4 {
 public:
  using Tensor4::Tensor4;
};

/// Average loss rate eta and per-outcome detection biases xi.
struct NoiseSpec {
  Real eta = 1.0;
  std::array<Real, 4> xi{1.0, 1.0, 1.0, 1.0};
  /// Throws std::invalid_argument unless eta in [0, 1], xi_b >= 0 and
  /// sum xi = 4 within 1e-9.
  void validate() const;
};

/// p(a, b | x, y) = Tr[E_b (sigma_{a|x} (x) tau_y)].
CorrelationTensor correlations(const Assemblage& asm_, const QuantumInputs& inputs,
                               const Povm& bob);

/// sum_{a,x,y} beta^{x,y}_{a,b} p(a, b | x, y).
Real payoff(const CorrelationTensor& p, const WitnessCoefficients& beta, std::size_t b);

/// Largest payoff reachable by an LHS assemblage under the maximally entangled
/// projector: max_lambda lambda_max(sum_{x,y} beta^{x,y}_{lambda(x),b} tau_y^T) / d.
Real lhs_payoff_bound(const WitnessCoefficients& beta, const QuantumInputs& inputs,
                      std::size_t b);

struct MdiBound {
  /// max{W - 1, 0}.
  Real value = 0.0;
  /// Optimal payoff sum beta p; the unclamped program optimum plus one.
  Real payoff = 0.0;
  /// Optimal coefficients; zero away from the requested outcome.
  WitnessCoefficients beta;
  SdpProblem problem;
  SdpSolution solution;
};

/// maximize sum beta p(., b | ., .) - 1
/// s.t. d 1 - sum_{x,y} beta^{x,y}_{lambda(x)} tau_y >= 0 for every lambda,
///      sum_y beta^{x,y}_a tau_y >= 0 for every (a, x).
/// Directions of beta that leave every sum_y beta tau_y unchanged are fixed to
/// zero, which keeps the program bounded on data outside the quantum set.
MdiBound mdi_sm_lb(const CorrelationTensor& p, const QuantumInputs& inputs, std::size_t b);

struct MdiAverage {
  /// max{(1/4) sum_b W_b - 1, 0}.
  Real value = 0.0;
  std::vector<MdiBound> per_outcome;
};

/// Four-outcome averaged estimator; requires |B| = 4.
MdiAverage mdi_sm_avg(const CorrelationTensor& p, const QuantumInputs& inputs);

/// Every entry scaled by eta.
CorrelationTensor apply_loss(const CorrelationTensor& p, Real eta);
/// Entry (a, b, x, y) scaled by xi_b. Throws if the result is no longer a
/// valid correlation tensor.
CorrelationTensor apply_bias(const CorrelationTensor& p, const std::array<Real, 4>& xi);

}  // namespace mdisteer
