#include "mdisteer/mdi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mdisteer {

namespace {

void check_outcome(const TensorDims& dims, std::size_t b, const char* what) {
  if (b >= dims.b) {
    throw std::out_of_range(std::string(what) + ": outcome index " + std::to_string(b) +
                            " out of range");
  }
}

void check_inputs(const TensorDims& dims, const QuantumInputs& inputs, const char* what) {
  if (dims.y != inputs.size()) {
    throw DimensionError(std::string(what) + ": tensor has " + std::to_string(dims.y) +
                         " inputs, input set has " + std::to_string(inputs.size()));
  }
}

}  // namespace

QuantumInputs::QuantumInputs(std::vector<State> states) : states_(std::move(states)) {
  if (states_.empty()) throw std::invalid_argument("quantum inputs: empty input set");
  const Eigen::Index d = states_.front().dim();
  RealMatrix t(d * d, static_cast<Eigen::Index>(states_.size()));
  for (std::size_t y = 0; y < states_.size(); ++y) {
    if (states_[y].dim() != d) throw DimensionError("quantum inputs: mixed dimensions");
    t.col(static_cast<Eigen::Index>(y)) = hermitian_to_real_vector(states_[y].op());
  }
  Eigen::JacobiSVD<RealMatrix> svd(t, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > kCompletenessTol) ++rank;
  complete_ = rank == d * d;
  kernel_ = svd.matrixV().rightCols(t.cols() - rank);
}

bool completeness_check(const QuantumInputs& inputs) { return inputs.complete(); }

Tensor4::Tensor4(TensorDims dims) : dims_(dims), values_(dims.size(), 0.0) {}

Tensor4::Tensor4(TensorDims dims, std::vector<Real> values)
    : dims_(dims), values_(std::move(values)) {
  if (values_.size() != dims_.size()) {
    throw DimensionError("tensor: " + std::to_string(values_.size()) + " values for shape of size " +
                         std::to_string(dims_.size()));
  }
  for (Real v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("tensor: non-finite entry");
  }
}

CorrelationTensor::CorrelationTensor(TensorDims dims, std::vector<Real> values, bool lossless)
    : Tensor4(dims, std::move(values)), lossless_(lossless) {
  if (dims_.size() == 0) throw std::invalid_argument("correlations: empty shape");
  for (Real& v : values_) {
    if (v < -kProbabilityClamp) {
      throw std::invalid_argument("correlations: negative probability " + std::to_string(v));
    }
    if (v < 0.0) v = 0.0;
  }
  for (std::size_t x = 0; x < dims_.x; ++x) {
    for (std::size_t y = 0; y < dims_.y; ++y) {
      const Real t = total(x, y);
      if (t > 1.0 + kNormalizationTol) {
        throw std::invalid_argument("correlations: probabilities for (x=" + std::to_string(x) +
                                    ", y=" + std::to_string(y) + ") sum to " + std::to_string(t));
      }
      if (lossless_ && std::abs(t - 1.0) > kNormalizationTol) {
        throw std::invalid_argument("correlations: lossless tensor is not normalized");
      }
    }
  }
}

Real CorrelationTensor::total(std::size_t x, std::size_t y) const {
  Real t = 0.0;
  for (std::size_t a = 0; a < dims_.a; ++a) {
    for (std::size_t b = 0; b < dims_.b; ++b) t += (*this)(a, b, x, y);
  }
  return t;
}

void NoiseSpec::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("noise: eta outside [0, 1]");
  Real sum = 0.0;
  for (Real x : xi) {
    if (!(x >= 0.0)) throw std::invalid_argument("noise: negative detection bias");
    sum += x;
  }
  if (std::abs(sum - 4.0) > 1e-9) throw std::invalid_argument("noise: biases do not sum to 4");
}

CorrelationTensor correlations(const Assemblage& asm_, const QuantumInputs& inputs,
                               const Povm& bob) {
  const Eigen::Index db = asm_.dim();
  const Eigen::Index d0 = inputs.dim();
  if (bob.dim() != db * d0) {
    throw DimensionError("correlations: Bob's measurement acts on dimension " +
                         std::to_string(bob.dim()) + ", expected " + std::to_string(db * d0));
  }
  const TensorDims dims{asm_.n_outcomes(), bob.size(), asm_.n_settings(), inputs.size()};
  std::vector<Real> values(dims.size());
  std::size_t k = 0;
  for (std::size_t a = 0; a < dims.a; ++a) {
    for (std::size_t b = 0; b < dims.b; ++b) {
      for (std::size_t x = 0; x < dims.x; ++x) {
        for (std::size_t y = 0; y < dims.y; ++y) {
          const ComplexMatrix joint = tensor_product(asm_(a, x).matrix(), inputs[y].matrix());
          values[k++] = (bob[b].matrix() * joint).trace().real();
        }
      }
    }
  }
  return CorrelationTensor(dims, std::move(values), true);
}

Real payoff(const CorrelationTensor& p, const WitnessCoefficients& beta, std::size_t b) {
  if (!(p.dims() == beta.dims())) throw DimensionError("payoff: shapes differ");
  check_outcome(p.dims(), b, "payoff");
  const auto& d = p.dims();
  Real total = 0.0;
  for (std::size_t a = 0; a < d.a; ++a) {
    for (std::size_t x = 0; x < d.x; ++x) {
      for (std::size_t y = 0; y < d.y; ++y) total += beta(a, b, x, y) * p(a, b, x, y);
    }
  }
  return total;
}

Real lhs_payoff_bound(const WitnessCoefficients& beta, const QuantumInputs& inputs,
                      std::size_t b) {
  const auto& d = beta.dims();
  check_inputs(d, inputs, "lhs_payoff_bound");
  check_outcome(d, b, "lhs_payoff_bound");
  const Eigen::Index n = inputs.dim();
  Real best = -std::numeric_limits<Real>::infinity();
  for (const auto& lambda : enumerate_strategies(d.x, d.a)) {
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (std::size_t x = 0; x < d.x; ++x) {
      for (std::size_t y = 0; y < d.y; ++y) {
        sum += beta(lambda(x), b, x, y) * inputs[y].matrix().transpose();
      }
    }
    best = std::max(best, max_eigenvalue(HermitianOperator(sum, 1e-9)));
  }
  return best / static_cast<Real>(n);
}

MdiBound mdi_sm_lb(const CorrelationTensor& p, const QuantumInputs& inputs, std::size_t b) {
  const auto& d = p.dims();
  check_inputs(d, inputs, "mdi_sm_lb");
  check_outcome(d, b, "mdi_sm_lb");
  const Eigen::Index n = inputs.dim();
  const auto var = [&](std::size_t a, std::size_t x, std::size_t y) {
    return (a * d.x + x) * d.y + y;
  };

  SdpProblem problem(d.a * d.x * d.y);
  for (std::size_t a = 0; a < d.a; ++a) {
    for (std::size_t x = 0; x < d.x; ++x) {
      for (std::size_t y = 0; y < d.y; ++y) {
        problem.objective()(static_cast<Eigen::Index>(var(a, x, y))) = -p(a, b, x, y);
      }
    }
  }
  for (const auto& lambda : enumerate_strategies(d.x, d.a)) {
    const auto blk = problem.add_block(HermitianOperator::identity(n) * static_cast<Real>(n));
    for (std::size_t x = 0; x < d.x; ++x) {
      for (std::size_t y = 0; y < d.y; ++y) {
        problem.set_coefficient(blk, var(lambda(x), x, y), inputs[y].op() * -1.0);
      }
    }
  }
  for (std::size_t a = 0; a < d.a; ++a) {
    for (std::size_t x = 0; x < d.x; ++x) {
      const auto blk = problem.add_block(HermitianOperator::zero(n));
      for (std::size_t y = 0; y < d.y; ++y) problem.set_coefficient(blk, var(a, x, y), inputs[y].op());
    }
  }
  // Gauge: beta^{x,.}_a orthogonal to every linear relation among the inputs.
  const RealMatrix& ker = inputs.kernel();
  for (std::size_t a = 0; a < d.a; ++a) {
    for (std::size_t x = 0; x < d.x; ++x) {
      for (Eigen::Index k = 0; k < ker.cols(); ++k) {
        RealVector row = RealVector::Zero(static_cast<Eigen::Index>(problem.n_vars()));
        for (std::size_t y = 0; y < d.y; ++y) {
          row(static_cast<Eigen::Index>(var(a, x, y))) = ker(static_cast<Eigen::Index>(y), k);
        }
        problem.add_equality(row, 0.0);
      }
    }
  }

  SdpSolution solution = solve(problem);
  if (solution.status == SdpStatus::Error && solution.message.find("unbounded") != std::string::npos) {
    throw std::logic_error("mdi_sm_lb: program reported unbounded: " + solution.message);
  }
  if (solution.status != SdpStatus::Optimal || !verify_certificate(problem, solution)) {
    throw SolverError("mdi_sm_lb: " + to_string(solution.status) + ": " + solution.message);
  }

  WitnessCoefficients beta(d);
  for (std::size_t a = 0; a < d.a; ++a) {
    for (std::size_t x = 0; x < d.x; ++x) {
      for (std::size_t y = 0; y < d.y; ++y) {
        beta(a, b, x, y) = solution.x(static_cast<Eigen::Index>(var(a, x, y)));
      }
    }
  }
  const Real w = -solution.primal_value;
  return MdiBound{std::max(w - 1.0, 0.0), w, std::move(beta), std::move(problem),
                  std::move(solution)};
}

MdiAverage mdi_sm_avg(const CorrelationTensor& p, const QuantumInputs& inputs) {
  if (p.dims().b != 4) {
    throw std::invalid_argument("mdi_sm_avg: needs four outcomes for Bob, got " +
                                std::to_string(p.dims().b));
  }
  MdiAverage out;
  Real sum = 0.0;
  for (std::size_t b = 0; b < 4; ++b) {
    out.per_outcome.push_back(mdi_sm_lb(p, inputs, b));
    sum += out.per_outcome.back().payoff;
  }
  out.value = std::max(sum / 4.0 - 1.0, 0.0);
  return out;
}

CorrelationTensor apply_loss(const CorrelationTensor& p, Real eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("apply_loss: eta outside [0, 1]");
  std::vector<Real> v = p.values();
  for (Real& e : v) e *= eta;
  return CorrelationTensor(p.dims(), std::move(v), p.lossless() && eta == 1.0);
}

CorrelationTensor apply_bias(const CorrelationTensor& p, const std::array<Real, 4>& xi) {
  NoiseSpec{1.0, xi}.validate();
  const auto& d = p.dims();
  if (d.b != 4) throw DimensionError("apply_bias: needs four outcomes for Bob");
  Tensor4 scaled(d);
  for (std::size_t a = 0; a < d.a; ++a) {
    for (std::size_t b = 0; b < d.b; ++b) {
      for (std::size_t x = 0; x < d.x; ++x) {
        for (std::size_t y = 0; y < d.y; ++y) scaled(a, b, x, y) = xi[b] * p(a, b, x, y);
      }
    }
  }
  bool normalized = p.lossless();
  for (std::size_t x = 0; x < d.x && normalized; ++x) {
    for (std::size_t y = 0; y < d.y; ++y) {
      Real t = 0.0;
      for (std::size_t a = 0; a < d.a; ++a) {
        for (std::size_t b = 0; b < d.b; ++b) t += scaled(a, b, x, y);
      }
      if (std::abs(t - 1.0) > kNormalizationTol) {
        normalized = false;
        break;
      }
    }
  }
  return CorrelationTensor(d, scaled.values(), normalized);
}

}  // namespace mdisteer
