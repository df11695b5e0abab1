#pragma once

// Small dense semidefinite programs in linear-matrix-inequality form:
//
//   minimize    c . x
//   subject to  F0^(k) + sum_i x_i F_i^(k)  >= 0   for every block k
//               A x = b
//
// with x real and every F Hermitian. The dual reads
//
//   maximize    -sum_k Tr(F0^(k) Z^(k)) + b . y
//   subject to  sum_k Tr(F_i^(k) Z^(k)) + (A^T y)_i = c_i,   Z^(k) >= 0.
//
// Equalities are removed by a nullspace parametrization, directions that
// leave every block unchanged are projected out, complex blocks are embedded
// as real symmetric blocks of twice the size, and the remaining real problem
// is solved by an infeasible-start primal-dual interior-point method (HKM
// direction, Mehrotra predictor-corrector).

#include <cstddef>
#include <string>
#include <vector>

#include "mdisteer/quantum.hpp"

namespace mdisteer {

/// Upper bound on the summed dimension of all blocks.
inline constexpr Eigen::Index kMaxTotalBlockDim = 256;

struct LmiBlock {
  HermitianOperator constant;
  /// One coefficient per variable; an empty vector means "all zero".
  std::vector<HermitianOperator> coefficients;
};

class SdpProblem {
 public:
  explicit SdpProblem(std::size_t n_vars);

  std::size_t n_vars() const { return n_vars_; }

  RealVector& objective() { return objective_; }
  const RealVector& objective() const { return objective_; }

  /// Appends a block with constant term `constant` and zero coefficients;
  /// returns its index.
  std::size_t add_block(HermitianOperator constant);
  void set_coefficient(std::size_t block, std::size_t var, HermitianOperator f);
  /// Appends the row `row . x = rhs`.
  void add_equality(const RealVector& row, Real rhs);

  const std::vector<LmiBlock>& blocks() const { return blocks_; }
  /// Coefficient F_var of `block`, or zero.
  HermitianOperator coefficient(std::size_t block, std::size_t var) const;
  bool has_coefficient(std::size_t block, std::size_t var) const;

  const RealMatrix& eq_matrix() const { return eq_matrix_; }
  const RealVector& eq_rhs() const { return eq_rhs_; }

  /// F0^(k) + sum_i x_i F_i^(k).
  HermitianOperator block_value(std::size_t block, const RealVector& x) const;

  /// Throws std::invalid_argument if any structural invariant is broken.
  void validate() const;

 private:
  std::size_t n_vars_;
  RealVector objective_;
  std::vector<LmiBlock> blocks_;
  RealMatrix eq_matrix_;
  RealVector eq_rhs_;
};

enum class SdpStatus { Optimal, Infeasible, Error };

std::string to_string(SdpStatus s);

struct SdpSolution {
  SdpStatus status = SdpStatus::Error;
  RealVector x;
  Real primal_value = 0.0;
  Real dual_value = 0.0;
  Real gap = 0.0;
  /// Z^(k), in the same (complex) space as the blocks. For an infeasible
  /// problem these together with eq_duals form a Farkas ray.
  std::vector<HermitianOperator> block_duals;
  RealVector eq_duals;
  int iterations = 0;
  std::string message;
};

struct SdpOptions {
  Real tol = 1e-8;
  int max_iterations = 120;
};

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options);
SdpSolution solve(const SdpProblem& problem, Real tol = 1e-8);

/// Residuals recomputed from the problem data and the reported solution.
struct CertificateCheck {
  bool ok = false;
  Real min_primal_eigenvalue = 0.0;
  Real min_dual_eigenvalue = 0.0;
  Real equality_residual = 0.0;
  Real dual_residual = 0.0;
  Real primal_value = 0.0;
  Real dual_value = 0.0;
  Real gap = 0.0;
  std::string reason;
};

/// Independent re-evaluation of a solution. For Optimal: primal blocks and
/// dual blocks PSD to -tol, equalities to 1e-8, dual equations to tol and
/// |primal - dual| <= tol * max(1, |primal|). For Infeasible: the duals must
/// form a normalized Farkas ray. Error solutions never verify.
CertificateCheck check_certificate(const SdpProblem& problem,
                                   const SdpSolution& solution,
                                   Real tol = 1e-7);
bool verify_certificate(const SdpProblem& problem, const SdpSolution& solution,
                        Real tol = 1e-7);

/// [[Re H, -Im H], [Im H, Re H]]: real symmetric, same spectrum as H with
/// every multiplicity doubled.
RealMatrix real_embedding(const HermitianOperator& h);

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves and throws SolverError unless the result is optimal and its
/// certificate verifies.
SdpSolution solve_certified(const SdpProblem& problem, Real tol = 1e-8);

}  // namespace mdisteer
