#include "mdisteer/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace mdisteer {

SdpProblem::SdpProblem(std::size_t n_vars)
    : n_vars_(n_vars),
      objective_(RealVector::Zero(static_cast<Eigen::Index>(n_vars))),
      eq_matrix_(0, static_cast<Eigen::Index>(n_vars)),
      eq_rhs_(0) {}

std::size_t SdpProblem::add_block(HermitianOperator constant) {
  blocks_.push_back(LmiBlock{std::move(constant), {}});
  return blocks_.size() - 1;
}

void SdpProblem::set_coefficient(std::size_t block, std::size_t var,
                                 HermitianOperator f) {
  if (block >= blocks_.size() || var >= n_vars_) {
    throw std::out_of_range("SdpProblem::set_coefficient: index out of range");
  }
  auto& b = blocks_[block];
  if (f.dim() != b.constant.dim()) {
    throw DimensionError("SdpProblem::set_coefficient: block dimension mismatch");
  }
  if (b.coefficients.empty()) b.coefficients.resize(n_vars_);
  b.coefficients[var] = std::move(f);
}

void SdpProblem::add_equality(const RealVector& row, Real rhs) {
  if (row.size() != static_cast<Eigen::Index>(n_vars_)) {
    throw DimensionError("SdpProblem::add_equality: row has wrong length");
  }
  eq_matrix_.conservativeResize(eq_matrix_.rows() + 1, Eigen::NoChange);
  eq_matrix_.row(eq_matrix_.rows() - 1) = row.transpose();
  eq_rhs_.conservativeResize(eq_rhs_.size() + 1);
  eq_rhs_(eq_rhs_.size() - 1) = rhs;
}

bool SdpProblem::has_coefficient(std::size_t block, std::size_t var) const {
  const auto& b = blocks_.at(block);
  return !b.coefficients.empty() && b.coefficients[var].dim() != 0;
}

HermitianOperator SdpProblem::coefficient(std::size_t block,
                                          std::size_t var) const {
  if (has_coefficient(block, var)) return blocks_[block].coefficients[var];
  return HermitianOperator::zero(blocks_.at(block).constant.dim());
}

HermitianOperator SdpProblem::block_value(std::size_t block,
                                          const RealVector& x) const {
  const auto& b = blocks_.at(block);
  ComplexMatrix m = b.constant.matrix();
  for (std::size_t i = 0; i < b.coefficients.size(); ++i) {
    if (b.coefficients[i].dim() != 0) {
      m += x(static_cast<Eigen::Index>(i)) * b.coefficients[i].matrix();
    }
  }
  return HermitianOperator(std::move(m), std::numeric_limits<Real>::infinity());
}

void SdpProblem::validate() const {
  if (objective_.size() != static_cast<Eigen::Index>(n_vars_)) {
    throw std::invalid_argument("SdpProblem: objective has wrong length");
  }
  if (!objective_.allFinite()) {
    throw std::invalid_argument("SdpProblem: objective is not finite");
  }
  Eigen::Index total = 0;
  for (const auto& b : blocks_) {
    if (b.constant.dim() == 0) throw std::invalid_argument("SdpProblem: empty block");
    total += b.constant.dim();
    if (!b.coefficients.empty() && b.coefficients.size() != n_vars_) {
      throw std::invalid_argument("SdpProblem: coefficient list has wrong length");
    }
    for (const auto& f : b.coefficients) {
      if (f.dim() != 0 && f.dim() != b.constant.dim()) {
        throw DimensionError("SdpProblem: inconsistent block dimension");
      }
    }
  }
  if (total > kMaxTotalBlockDim) {
    throw std::invalid_argument("SdpProblem: total block dimension exceeds " +
                                std::to_string(kMaxTotalBlockDim));
  }
  if (eq_matrix_.cols() != static_cast<Eigen::Index>(n_vars_) ||
      eq_matrix_.rows() != eq_rhs_.size()) {
    throw DimensionError("SdpProblem: equality system has wrong shape");
  }
  if (!eq_matrix_.allFinite() || !eq_rhs_.allFinite()) {
    throw std::invalid_argument("SdpProblem: equality data not finite");
  }
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal:
      return "optimal";
    case SdpStatus::Infeasible:
      return "infeasible";
    case SdpStatus::Error:
      return "error";
  }
  return "error";
}

namespace {

// ---------------------------------------------------------------------------
// Reduction to an inequality-only real problem with independent directions.

struct RealBlock {
  Eigen::Index n = 0;
  bool embedded = false;  // complex block stored as [[Re, -Im], [Im, Re]]
  RealMatrix constant;
  std::vector<RealMatrix> coeffs;  // per reduced variable; size 0 => zero
  std::vector<int> active;
};

struct ReducedProblem {
  RealVector x0;       // particular solution of A x = b
  RealMatrix basis;    // x = x0 + basis * w
  RealVector c;        // objective in w
  Real c_offset = 0;   // c . x0
  std::vector<RealBlock> blocks;
};

RealMatrix embed(const ComplexMatrix& m, bool complex_block) {
  if (!complex_block) return m.real();
  const auto n = m.rows();
  RealMatrix r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = m.real();
  r.topRightCorner(n, n) = -m.imag();
  r.bottomLeftCorner(n, n) = m.imag();
  r.bottomRightCorner(n, n) = m.real();
  return r;
}

// Adjoint of `embed` with respect to the trace inner products:
// Tr(embed(F) Zr) = Re Tr(F W) for every Hermitian F.
ComplexMatrix unembed_dual(const RealMatrix& zr, bool complex_block) {
  if (!complex_block) return zr.cast<Complex>();
  const auto n = zr.rows() / 2;
  const RealMatrix p = zr.topLeftCorner(n, n);
  const RealMatrix q = zr.topRightCorner(n, n);
  const RealMatrix r = zr.bottomRightCorner(n, n);
  ComplexMatrix w(n, n);
  w.real() = p + r;
  w.imag() = q.transpose() - q;
  return w;
}

Real frob_dot(const RealMatrix& a, const RealMatrix& b) {
  return (a.array() * b.array()).sum();
}

struct Reduction {
  std::optional<ReducedProblem> problem;
  SdpStatus status = SdpStatus::Optimal;
  std::string message;
  RealVector eq_ray;  // for inconsistent equalities
};

Reduction reduce(const SdpProblem& p) {
  Reduction out;
  const auto n = static_cast<Eigen::Index>(p.n_vars());
  ReducedProblem rp;

  // Nullspace parametrization of A x = b.
  RealMatrix nullspace = RealMatrix::Identity(n, n);
  rp.x0 = RealVector::Zero(n);
  if (p.eq_matrix().rows() > 0) {
    const RealMatrix& a = p.eq_matrix();
    Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    const Real thresh = 1e-12 * std::max<Real>(1.0, sv.size() ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > thresh) ++rank;
    RealVector x0 = RealVector::Zero(n);
    const RealVector ub = svd.matrixU().transpose() * p.eq_rhs();
    for (Eigen::Index k = 0; k < rank; ++k) {
      x0 += (ub(k) / sv(k)) * svd.matrixV().col(k);
    }
    const RealVector resid = p.eq_rhs() - a * x0;
    if (resid.norm() > 1e-9 * (1.0 + p.eq_rhs().norm())) {
      out.status = SdpStatus::Infeasible;
      out.message = "equality constraints are inconsistent";
      out.eq_ray = resid / resid.squaredNorm();
      return out;
    }
    rp.x0 = x0;
    nullspace = svd.matrixV().rightCols(n - rank);
  }

  // Blocks in the nullspace coordinates (still complex).
  const auto m1 = nullspace.cols();
  std::vector<ComplexMatrix> const_blocks;
  std::vector<std::vector<ComplexMatrix>> coeff_blocks;
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    const auto& b = p.blocks()[k];
    ComplexMatrix c0 = b.constant.matrix();
    std::vector<ComplexMatrix> cs(static_cast<std::size_t>(m1),
                                  ComplexMatrix::Zero(b.constant.dim(),
                                                      b.constant.dim()));
    for (std::size_t i = 0; i < b.coefficients.size(); ++i) {
      if (b.coefficients[i].dim() == 0) continue;
      const auto& fi = b.coefficients[i].matrix();
      const auto ii = static_cast<Eigen::Index>(i);
      c0 += rp.x0(ii) * fi;
      for (Eigen::Index j = 0; j < m1; ++j) {
        if (nullspace(ii, j) != 0.0) cs[static_cast<std::size_t>(j)] += nullspace(ii, j) * fi;
      }
    }
    const_blocks.push_back(std::move(c0));
    coeff_blocks.push_back(std::move(cs));
  }
  const RealVector c1 = nullspace.transpose() * p.objective();

  // Project out directions that leave every block unchanged.
  RealMatrix gram = RealMatrix::Zero(m1, m1);
  for (const auto& cs : coeff_blocks) {
    for (Eigen::Index i = 0; i < m1; ++i) {
      for (Eigen::Index j = i; j < m1; ++j) {
        const Real v = (cs[static_cast<std::size_t>(i)].array() *
                        cs[static_cast<std::size_t>(j)].array().conjugate())
                           .sum()
                           .real();
        gram(i, j) += v;
        if (i != j) gram(j, i) += v;
      }
    }
  }
  RealMatrix range;
  if (m1 > 0) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram);
    const Real top = std::max<Real>(es.eigenvalues().maxCoeff(), 0.0);
    const Real thresh = 1e-12 * std::max<Real>(1.0, top);
    std::vector<Eigen::Index> keep, drop;
    for (Eigen::Index k = 0; k < m1; ++k) {
      (es.eigenvalues()(k) > thresh ? keep : drop).push_back(k);
    }
    for (auto k : drop) {
      const Real slope = es.eigenvectors().col(k).dot(c1);
      if (std::abs(slope) > 1e-10 * (1.0 + c1.norm())) {
        out.status = SdpStatus::Error;
        out.message =
            "unbounded: the objective varies along a direction that leaves "
            "every block and equality unchanged";
        return out;
      }
    }
    range.resize(m1, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      range.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
    }
  } else {
    range.resize(0, 0);
  }
  const auto m = range.cols();
  rp.basis = nullspace * range;
  rp.c = range.transpose() * c1;
  rp.c_offset = p.objective().dot(rp.x0);

  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    RealBlock rb;
    bool is_complex = const_blocks[k].imag().cwiseAbs().maxCoeff() > 0.0;
    std::vector<ComplexMatrix> cs(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
      ComplexMatrix acc = ComplexMatrix::Zero(const_blocks[k].rows(), const_blocks[k].cols());
      for (Eigen::Index i = 0; i < m1; ++i) {
        if (range(i, j) != 0.0) acc += range(i, j) * coeff_blocks[k][static_cast<std::size_t>(i)];
      }
      if (acc.imag().cwiseAbs().maxCoeff() > 0.0) is_complex = true;
      cs[static_cast<std::size_t>(j)] = std::move(acc);
    }
    rb.embedded = is_complex;
    rb.constant = embed(const_blocks[k], is_complex);
    rb.n = rb.constant.rows();
    rb.coeffs.resize(static_cast<std::size_t>(m));
    const Real scale = 1e-14 * std::max<Real>(1.0, rb.constant.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < m; ++j) {
      RealMatrix e = embed(cs[static_cast<std::size_t>(j)], is_complex);
      if (e.cwiseAbs().maxCoeff() > scale) {
        rb.coeffs[static_cast<std::size_t>(j)] = std::move(e);
        rb.active.push_back(static_cast<int>(j));
      }
    }
    rp.blocks.push_back(std::move(rb));
  }
  out.problem = std::move(rp);
  return out;
}

// ---------------------------------------------------------------------------
// Interior-point core on the reduced real problem.

struct IpmResult {
  bool converged = false;
  bool diverged = false;
  RealVector w;
  std::vector<RealMatrix> z;
  int iterations = 0;
  std::string message;
};

using BlockMats = std::vector<RealMatrix>;

Real max_step(const BlockMats& x, const BlockMats& dx) {
  Real step = std::numeric_limits<Real>::infinity();
  for (std::size_t k = 0; k < x.size(); ++k) {
    Eigen::LLT<RealMatrix> llt(x[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    const RealMatrix linv = llt.matrixL().solve(RealMatrix::Identity(x[k].rows(), x[k].cols()));
    RealMatrix t = linv * dx[k] * linv.transpose();
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(t, Eigen::EigenvaluesOnly);
    const Real lmin = es.eigenvalues().minCoeff();
    if (lmin < 0) step = std::min(step, -1.0 / lmin);
  }
  return step;
}

IpmResult interior_point(const ReducedProblem& rp, Real tol, int max_iter) {
  const auto& blocks = rp.blocks;
  const auto m = rp.c.size();
  const std::size_t nb = blocks.size();
  IpmResult res;

  Eigen::Index n_total = 0;
  Real f0_norm = 0, f_norm = 0, zeta = 0;
  for (const auto& b : blocks) {
    n_total += b.n;
    f0_norm = std::max(f0_norm, b.constant.norm());
  }
  RealVector fcol_norm = RealVector::Zero(m);
  for (const auto& b : blocks) {
    for (int j : b.active) {
      const Real v = b.coeffs[static_cast<std::size_t>(j)].norm();
      fcol_norm(j) += v * v;
      f_norm = std::max(f_norm, v);
    }
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    zeta = std::max(zeta, (1.0 + std::abs(rp.c(j))) / (1.0 + std::sqrt(fcol_norm(j))));
  }
  const Real sqrt_n = std::sqrt(static_cast<Real>(std::max<Eigen::Index>(n_total, 1)));
  const Real s_init = std::max({10.0, sqrt_n, f0_norm, f_norm});
  const Real z_init = std::max({10.0, sqrt_n, zeta});

  RealVector w = RealVector::Zero(m);
  BlockMats s(nb), z(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    s[k] = s_init * RealMatrix::Identity(blocks[k].n, blocks[k].n);
    z[k] = z_init * RealMatrix::Identity(blocks[k].n, blocks[k].n);
  }
  if (n_total == 0) {
    res.converged = true;
    res.w = w;
    res.z = z;
    return res;
  }

  const Real c_norm = rp.c.norm();
  Real best_merit = std::numeric_limits<Real>::infinity();
  int stall = 0;

  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it;
    // Residuals.
    BlockMats rp_res(nb);
    Real rp_norm2 = 0, mu_sum = 0, dobj = 0;
    for (std::size_t k = 0; k < nb; ++k) {
      rp_res[k] = blocks[k].constant - s[k];
      for (int j : blocks[k].active) rp_res[k] += w(j) * blocks[k].coeffs[static_cast<std::size_t>(j)];
      rp_norm2 += rp_res[k].squaredNorm();
      mu_sum += frob_dot(s[k], z[k]);
      dobj -= frob_dot(blocks[k].constant, z[k]);
    }
    RealVector rd = rp.c;
    for (std::size_t k = 0; k < nb; ++k) {
      for (int j : blocks[k].active) rd(j) -= frob_dot(blocks[k].coeffs[static_cast<std::size_t>(j)], z[k]);
    }
    const Real pobj = rp.c.dot(w);
    const Real mu = mu_sum / static_cast<Real>(n_total);
    const Real pinf = std::sqrt(rp_norm2) / (1.0 + f0_norm);
    const Real dinf = rd.norm() / (1.0 + c_norm);
    const Real gap = std::abs(pobj - dobj);
    const Real scale = std::max<Real>(1.0, std::abs(pobj + rp.c_offset));
    const Real target = 0.05 * tol;
    if (pinf <= target && dinf <= target && gap <= target * scale &&
        mu_sum <= target * scale) {
      res.converged = true;
      break;
    }
    const Real merit = std::max({pinf, dinf, gap / scale, mu_sum / scale});
    if (merit < 0.5 * best_merit) {
      best_merit = merit;
      stall = 0;
    } else if (++stall > 8) {
      if (merit <= 0.5 * tol) {
        res.converged = true;
        res.message = "stalled close to optimality";
      } else {
        res.message = "no progress";
      }
      break;
    }
    if (w.size() && (!w.allFinite() || w.norm() > 1e12)) {
      res.diverged = true;
      res.message = "primal iterates diverge";
      break;
    }
    Real znorm = 0;
    for (const auto& zk : z) znorm = std::max(znorm, zk.norm());
    if (!std::isfinite(znorm) || znorm > 1e12) {
      res.diverged = true;
      res.message = "dual iterates diverge";
      break;
    }

    // Schur complement M_ij = sum_k Tr(F_i S^-1 F_j Z).
    BlockMats sinv(nb);
    bool ok = true;
    for (std::size_t k = 0; k < nb; ++k) {
      Eigen::LLT<RealMatrix> llt(s[k]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      sinv[k] = llt.solve(RealMatrix::Identity(blocks[k].n, blocks[k].n));
      sinv[k] = 0.5 * (sinv[k] + sinv[k].transpose()).eval();
    }
    if (!ok) {
      res.message = "slack lost positive definiteness";
      break;
    }
    RealMatrix schur = RealMatrix::Zero(m, m);
    for (std::size_t k = 0; k < nb; ++k) {
      const auto& b = blocks[k];
      for (int j : b.active) {
        const RealMatrix g = sinv[k] * b.coeffs[static_cast<std::size_t>(j)] * z[k];
        for (int i : b.active) {
          schur(i, j) += frob_dot(b.coeffs[static_cast<std::size_t>(i)], g);
        }
      }
    }
    schur = 0.5 * (schur + schur.transpose()).eval();
    Eigen::LLT<RealMatrix> schur_llt(schur);
    Eigen::LDLT<RealMatrix> schur_ldlt;
    const bool use_llt = schur_llt.info() == Eigen::Success;
    if (!use_llt) schur_ldlt.compute(schur);

    auto direction = [&](Real sigma_mu, const BlockMats* corr, RealVector& dw,
                         BlockMats& ds, BlockMats& dz) {
      BlockMats base(nb);
      RealVector h = -rd;
      for (std::size_t k = 0; k < nb; ++k) {
        base[k] = sigma_mu * sinv[k] - z[k] - sinv[k] * rp_res[k] * z[k];
        if (corr) base[k] -= (*corr)[k];
        for (int i : blocks[k].active) h(i) += frob_dot(blocks[k].coeffs[static_cast<std::size_t>(i)], base[k]);
      }
      if (m == 0) {
        dw = RealVector();
      } else if (use_llt) {
        dw = schur_llt.solve(h);
      } else {
        dw = schur_ldlt.solve(h);
      }
      ds.resize(nb);
      dz.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        ds[k] = rp_res[k];
        for (int j : blocks[k].active) ds[k] += dw(j) * blocks[k].coeffs[static_cast<std::size_t>(j)];
        RealMatrix d = sigma_mu * sinv[k] - z[k] - sinv[k] * ds[k] * z[k];
        if (corr) d -= (*corr)[k];
        dz[k] = 0.5 * (d + d.transpose());
      }
    };

    // Predictor.
    RealVector dw_a;
    BlockMats ds_a, dz_a;
    direction(0.0, nullptr, dw_a, ds_a, dz_a);
    const Real ap_a = std::min<Real>(1.0, max_step(s, ds_a));
    const Real ad_a = std::min<Real>(1.0, max_step(z, dz_a));
    Real mu_aff = 0;
    for (std::size_t k = 0; k < nb; ++k) {
      mu_aff += frob_dot(s[k] + ap_a * ds_a[k], z[k] + ad_a * dz_a[k]);
    }
    mu_aff /= static_cast<Real>(n_total);
    Real sigma = mu > 0 ? std::pow(std::max<Real>(mu_aff, 0.0) / mu, 3) : 0.0;
    sigma = std::clamp<Real>(sigma, 0.0, 1.0);

    // Corrector.
    BlockMats corr(nb);
    for (std::size_t k = 0; k < nb; ++k) corr[k] = sinv[k] * ds_a[k] * dz_a[k];
    RealVector dw;
    BlockMats ds, dz;
    direction(sigma * mu, &corr, dw, ds, dz);
    if ((m && !dw.allFinite())) {
      res.message = "non-finite search direction";
      break;
    }
    const Real gamma = 0.9 + 0.09 * std::min(ap_a, ad_a);
    const Real ap = std::min<Real>(1.0, gamma * max_step(s, ds));
    const Real ad = std::min<Real>(1.0, gamma * max_step(z, dz));
    if (ap <= 0.0 && ad <= 0.0) {
      res.message = "zero step length";
      break;
    }
    if (m) w += ap * dw;
    for (std::size_t k = 0; k < nb; ++k) {
      s[k] += ap * ds[k];
      s[k] = 0.5 * (s[k] + s[k].transpose()).eval();
      z[k] += ad * dz[k];
      z[k] = 0.5 * (z[k] + z[k].transpose()).eval();
    }
    res.iterations = it + 1;
  }
  if (!res.converged && res.message.empty()) res.message = "iteration limit reached";
  res.w = w;
  res.z = z;
  return res;
}

// Original-space quantities from reduced iterates.
void fill_solution(const SdpProblem& p, const ReducedProblem& rp,
                   const IpmResult& ipm, SdpSolution& sol) {
  sol.x = rp.x0 + rp.basis * ipm.w;
  sol.block_duals.clear();
  for (std::size_t k = 0; k < rp.blocks.size(); ++k) {
    sol.block_duals.emplace_back(unembed_dual(ipm.z[k], rp.blocks[k].embedded),
                                 std::numeric_limits<Real>::infinity());
  }
  // Equality multipliers from A^T y = c - (Tr F_i Z)_i.
  const auto n = static_cast<Eigen::Index>(p.n_vars());
  RealVector g = p.objective();
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (p.has_coefficient(k, static_cast<std::size_t>(i))) {
        g(i) -= trace_product(p.blocks()[k].coefficients[static_cast<std::size_t>(i)],
                              sol.block_duals[k]);
      }
    }
  }
  if (p.eq_matrix().rows() > 0) {
    sol.eq_duals = p.eq_matrix().transpose().completeOrthogonalDecomposition().solve(g);
  } else {
    sol.eq_duals = RealVector(0);
  }
  sol.primal_value = p.objective().dot(sol.x);
  Real dual = p.eq_rhs().dot(sol.eq_duals);
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    dual -= trace_product(p.blocks()[k].constant, sol.block_duals[k]);
  }
  sol.dual_value = dual;
  sol.gap = std::abs(sol.primal_value - sol.dual_value);
  sol.iterations = ipm.iterations;
}

// Phase one: minimize t subject to F(x) + t 1 >= 0, t >= -1. A strictly
// positive optimum proves infeasibility; its dual is the Farkas ray.
std::optional<SdpSolution> phase_one(const SdpProblem& p, const ReducedProblem& rp,
                                     Real tol, int max_iter) {
  ReducedProblem aux = rp;
  const auto m = rp.c.size();
  aux.c = RealVector::Zero(m + 1);
  aux.c(m) = 1.0;
  aux.c_offset = 0.0;
  for (auto& b : aux.blocks) {
    b.coeffs.push_back(RealMatrix::Identity(b.n, b.n));
    b.active.push_back(static_cast<int>(m));
  }
  RealBlock bound;
  bound.n = 1;
  bound.constant = RealMatrix::Ones(1, 1);
  bound.coeffs.assign(static_cast<std::size_t>(m + 1), RealMatrix());
  bound.coeffs[static_cast<std::size_t>(m)] = RealMatrix::Ones(1, 1);
  bound.active.push_back(static_cast<int>(m));
  for (auto& b : aux.blocks) {
    if (b.coeffs.size() < static_cast<std::size_t>(m + 1)) b.coeffs.resize(static_cast<std::size_t>(m + 1));
  }
  aux.blocks.push_back(bound);
  const IpmResult ipm = interior_point(aux, tol, max_iter);
  if (!ipm.converged) return std::nullopt;
  const Real t = ipm.w(m);
  if (t <= tol) return std::nullopt;

  SdpSolution sol;
  sol.status = SdpStatus::Infeasible;
  sol.iterations = ipm.iterations;
  sol.x = rp.x0 + rp.basis * ipm.w.head(m);
  Real trace = 0;
  for (std::size_t k = 0; k < rp.blocks.size(); ++k) {
    sol.block_duals.emplace_back(unembed_dual(ipm.z[k], rp.blocks[k].embedded),
                                 std::numeric_limits<Real>::infinity());
    trace += sol.block_duals.back().trace();
  }
  const auto n = static_cast<Eigen::Index>(p.n_vars());
  RealVector g = RealVector::Zero(n);
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (p.has_coefficient(k, static_cast<std::size_t>(i))) {
        g(i) += trace_product(p.blocks()[k].coefficients[static_cast<std::size_t>(i)],
                              sol.block_duals[k]);
      }
    }
  }
  sol.eq_duals = p.eq_matrix().rows() > 0
                     ? RealVector(p.eq_matrix().transpose().completeOrthogonalDecomposition().solve(-g))
                     : RealVector(0);
  Real ray = p.eq_rhs().dot(sol.eq_duals);
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    ray -= trace_product(p.blocks()[k].constant, sol.block_duals[k]);
  }
  // Normalize to unit total dual trace.
  if (trace > 0) {
    for (auto& z : sol.block_duals) z = z * (1.0 / trace);
    sol.eq_duals /= trace;
    ray /= trace;
  }
  sol.primal_value = std::numeric_limits<Real>::infinity();
  sol.dual_value = ray;
  sol.gap = 0;
  sol.message = "primal infeasible; minimal constraint violation " + std::to_string(t);
  return sol;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options) {
  problem.validate();
  SdpSolution sol;
  Reduction red = reduce(problem);
  if (!red.problem) {
    sol.status = red.status;
    sol.message = red.message;
    if (red.status == SdpStatus::Infeasible) {
      for (const auto& b : problem.blocks()) {
        sol.block_duals.push_back(HermitianOperator::zero(b.constant.dim()));
      }
      sol.eq_duals = red.eq_ray;
      sol.dual_value = problem.eq_rhs().dot(red.eq_ray);
      sol.primal_value = std::numeric_limits<Real>::infinity();
    }
    return sol;
  }
  const ReducedProblem& rp = *red.problem;
  const IpmResult ipm = interior_point(rp, options.tol, options.max_iterations);
  if (ipm.converged) {
    fill_solution(problem, rp, ipm, sol);
    const CertificateCheck chk = check_certificate(
        problem, SdpSolution{SdpStatus::Optimal, sol.x, sol.primal_value,
                             sol.dual_value, sol.gap, sol.block_duals,
                             sol.eq_duals, sol.iterations, {}},
        options.tol);
    if (chk.ok) {
      sol.status = SdpStatus::Optimal;
      sol.message = ipm.message.empty() ? "optimal" : ipm.message;
      return sol;
    }
    sol.status = SdpStatus::Error;
    sol.message = "converged iterate failed self-check: " + chk.reason;
    return sol;
  }
  if (auto infeasible = phase_one(problem, rp, options.tol, options.max_iterations)) {
    return *infeasible;
  }
  fill_solution(problem, rp, ipm, sol);
  sol.status = SdpStatus::Error;
  sol.message = ipm.message + " after " + std::to_string(ipm.iterations) +
                " iterations (primal " + std::to_string(sol.primal_value) +
                ", dual " + std::to_string(sol.dual_value) + ")";
  return sol;
}

SdpSolution solve(const SdpProblem& problem, Real tol) {
  SdpOptions opt;
  opt.tol = tol;
  return solve(problem, opt);
}

CertificateCheck check_certificate(const SdpProblem& p, const SdpSolution& s,
                                   Real tol) {
  CertificateCheck chk;
  const auto n = static_cast<Eigen::Index>(p.n_vars());
  if (s.status == SdpStatus::Error) {
    chk.reason = "solution has error status";
    return chk;
  }
  if (s.block_duals.size() != p.blocks().size()) {
    chk.reason = "wrong number of block duals";
    return chk;
  }
  if (s.eq_duals.size() != p.eq_matrix().rows()) {
    chk.reason = "wrong number of equality duals";
    return chk;
  }
  chk.min_dual_eigenvalue = std::numeric_limits<Real>::infinity();
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    if (s.block_duals[k].dim() != p.blocks()[k].constant.dim()) {
      chk.reason = "block dual has wrong dimension";
      return chk;
    }
    chk.min_dual_eigenvalue = std::min(chk.min_dual_eigenvalue, min_eigenvalue(s.block_duals[k]));
  }
  // Dual equations: sum_k Tr(F_i Z_k) + (A^T y)_i against c_i (optimal) or 0 (ray).
  RealVector lhs = p.eq_matrix().transpose() * s.eq_duals;
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (p.has_coefficient(k, static_cast<std::size_t>(i))) {
        lhs(i) += trace_product(p.blocks()[k].coefficients[static_cast<std::size_t>(i)],
                                s.block_duals[k]);
      }
    }
  }
  Real dual_obj = p.eq_rhs().dot(s.eq_duals);
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    dual_obj -= trace_product(p.blocks()[k].constant, s.block_duals[k]);
  }
  chk.dual_value = dual_obj;

  if (s.status == SdpStatus::Infeasible) {
    chk.dual_residual = n ? lhs.cwiseAbs().maxCoeff() : 0.0;
    Real scale = s.eq_duals.size() ? s.eq_duals.cwiseAbs().maxCoeff() : 0.0;
    for (const auto& z : s.block_duals) scale = std::max(scale, z.trace());
    if (scale <= 0) {
      chk.reason = "empty Farkas ray";
    } else if (chk.min_dual_eigenvalue < -tol * scale) {
      chk.reason = "Farkas ray not PSD";
    } else if (chk.dual_residual > tol * scale) {
      chk.reason = "Farkas ray does not annihilate the coefficients";
    } else if (dual_obj <= tol * scale) {
      chk.reason = "Farkas ray does not separate";
    } else {
      chk.ok = true;
    }
    return chk;
  }

  if (s.x.size() != n || !s.x.allFinite()) {
    chk.reason = "primal vector missing or not finite";
    return chk;
  }
  chk.min_primal_eigenvalue = std::numeric_limits<Real>::infinity();
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    chk.min_primal_eigenvalue =
        std::min(chk.min_primal_eigenvalue, min_eigenvalue(p.block_value(k, s.x)));
  }
  if (p.blocks().empty()) chk.min_primal_eigenvalue = 0;
  if (p.blocks().empty()) chk.min_dual_eigenvalue = 0;
  chk.equality_residual =
      p.eq_matrix().rows() ? (p.eq_matrix() * s.x - p.eq_rhs()).cwiseAbs().maxCoeff() : 0.0;
  chk.dual_residual = n ? (lhs - p.objective()).cwiseAbs().maxCoeff() : 0.0;
  chk.primal_value = p.objective().dot(s.x);
  chk.gap = std::abs(chk.primal_value - chk.dual_value);
  const Real scale = std::max<Real>(1.0, std::abs(chk.primal_value));
  if (chk.min_primal_eigenvalue < -tol) {
    chk.reason = "primal block not PSD (" + std::to_string(chk.min_primal_eigenvalue) + ")";
  } else if (chk.equality_residual > 1e-8) {
    chk.reason = "equality residual " + std::to_string(chk.equality_residual);
  } else if (chk.min_dual_eigenvalue < -tol) {
    chk.reason = "dual block not PSD";
  } else if (chk.dual_residual > tol) {
    chk.reason = "dual residual " + std::to_string(chk.dual_residual);
  } else if (chk.gap > tol * scale) {
    chk.reason = "duality gap " + std::to_string(chk.gap);
  } else if (chk.dual_value > chk.primal_value + 1e-9 * scale) {
    chk.reason = "weak duality violated";
  } else if (std::abs(chk.primal_value - s.primal_value) > tol * scale ||
             std::abs(chk.dual_value - s.dual_value) > tol * scale) {
    chk.reason = "reported objective values do not match the data";
  } else {
    chk.ok = true;
  }
  return chk;
}

RealMatrix real_embedding(const HermitianOperator& h) {
  return embed(h.matrix(), true);
}

bool verify_certificate(const SdpProblem& problem, const SdpSolution& solution,
                        Real tol) {
  return check_certificate(problem, solution, tol).ok;
}

SdpSolution solve_certified(const SdpProblem& problem, Real tol) {
  SdpSolution sol = solve(problem, tol);
  if (sol.status != SdpStatus::Optimal) {
    throw SolverError("SDP " + to_string(sol.status) + ": " + sol.message);
  }
  const CertificateCheck chk = check_certificate(problem, sol, std::max(tol, 1e-7));
  if (!chk.ok) throw SolverError("SDP certificate rejected: " + chk.reason);
  return sol;
}

}  // namespace mdisteer
