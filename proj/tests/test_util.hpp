#pragma once

// Random generators shared by the property tests.

#include <random>
#include <vector>

#include "mdisteer/quantum.hpp"

namespace mdisteer::testgen {

inline ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols,
                             std::mt19937_64& rng) {
  std::normal_distribution<Real> n(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(n(rng), n(rng));
  }
  return g;
}

inline ComplexMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(d, d, rng));
  return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

/// Ginibre-distributed mixed state of rank `rank` (full rank by default).
inline State random_state(Eigen::Index d, std::mt19937_64& rng,
                          Eigen::Index rank = 0) {
  const ComplexMatrix g = ginibre(d, rank > 0 ? rank : d, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return State(HermitianOperator(rho, 1e-9));
}

inline ComplexVector random_ket(Eigen::Index d, std::mt19937_64& rng) {
  ComplexVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

/// Random rank-one projective measurement on C^d.
inline Povm random_projective(Eigen::Index d, std::mt19937_64& rng) {
  const ComplexMatrix u = random_unitary(d, rng);
  std::vector<HermitianOperator> effects;
  for (Eigen::Index k = 0; k < d; ++k) {
    effects.push_back(HermitianOperator::projector(u.col(k)));
  }
  return Povm(std::move(effects));
}

inline MeasurementAssembly random_projective_assembly(std::size_t settings,
                                                      Eigen::Index d,
                                                      std::mt19937_64& rng) {
  std::vector<Povm> s;
  for (std::size_t x = 0; x < settings; ++x) s.push_back(random_projective(d, rng));
  return MeasurementAssembly(std::move(s));
}

/// Random full-rank POVM with `outcomes` effects on C^d.
inline Povm random_povm(std::size_t outcomes, Eigen::Index d,
                        std::mt19937_64& rng) {
  std::vector<ComplexMatrix> raw;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t b = 0; b < outcomes; ++b) {
    const ComplexMatrix g = ginibre(d, d, rng);
    raw.push_back(g * g.adjoint());
    sum += raw.back();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sum);
  const ComplexMatrix inv_sqrt = es.eigenvectors() *
                                 es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                                 es.eigenvectors().adjoint();
  std::vector<HermitianOperator> effects;
  for (const auto& r : raw) {
    effects.emplace_back(ComplexMatrix(inv_sqrt * r * inv_sqrt), 1e-9);
  }
  // Absorb rounding so the effects sum to identity exactly enough.
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (const auto& e : effects) total += e.matrix();
  effects.back() = HermitianOperator(
      ComplexMatrix(effects.back().matrix() + ComplexMatrix::Identity(d, d) - total), 1e-9);
  return Povm(std::move(effects));
}

}  // namespace mdisteer::testgen
