#ifndef QHPM_RANDOM_SYSTEMS_HPP_
#define QHPM_RANDOM_SYSTEMS_HPP_

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "qhpm/linalg.hpp"
#include "qhpm/quadratic_system.hpp"

namespace qhpm {

/// Reproducible generator for instance `index` of a suite seeded with `seed`.
inline std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::Index uniform_index(std::mt19937_64& rng, Eigen::Index lo, Eigen::Index hi) {
  return std::uniform_int_distribution<Eigen::Index>(lo, hi)(rng);
}

/*
 * F1 = D + rho E with D diagonal in [1.5, 3] and ||E|| = 1, rho <= 0.4, so
 * sigma_min(F1) >= 1.1 and ||F1^-1|| < 1. E has at most `row_nnz - 1`
 * off-diagonal entries per row.
 */
inline SparseMatrix random_linear_part(std::mt19937_64& rng, Eigen::Index n, Eigen::Index row_nnz) {
  std::normal_distribution<double> normal;
  std::vector<Triplet> off;
  for (Eigen::Index r = 0; r < n; ++r) {
    std::set<Eigen::Index> cols;
    const Eigen::Index want = std::min<Eigen::Index>(row_nnz - 1, n - 1);
    while (static_cast<Eigen::Index>(cols.size()) < want) {
      const Eigen::Index c = uniform_index(rng, 0, n - 1);
      if (c != r) cols.insert(c);
    }
    for (Eigen::Index c : cols) off.emplace_back(r, c, normal(rng));
  }
  SparseMatrix e(n, n);
  e.setFromTriplets(off.begin(), off.end());
  const double enorm = spectral_norm(e);
  const double rho = uniform(rng, 0.0, 0.4);
  std::vector<Triplet> all;
  for (Eigen::Index k = 0; k < e.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(e, k); it; ++it)
      all.emplace_back(it.row(), it.col(), enorm > 0.0 ? rho * it.value() / enorm : 0.0);
  for (Eigen::Index r = 0; r < n; ++r) all.emplace_back(r, r, uniform(rng, 1.5, 3.0));
  SparseMatrix f1(n, n);
  f1.setFromTriplets(all.begin(), all.end());
  return f1;
}

/// n x n^2 with `row_nnz` entries per row, scaled to spectral norm `norm`.
inline SparseMatrix random_quadratic_part(std::mt19937_64& rng, Eigen::Index n, Eigen::Index row_nnz, double norm) {
  SparseMatrix f2(n, n * n);
  if (norm == 0.0) return f2;
  std::normal_distribution<double> normal;
  std::vector<Triplet> t;
  for (Eigen::Index r = 0; r < n; ++r) {
    std::set<Eigen::Index> cols;
    while (static_cast<Eigen::Index>(cols.size()) < std::min(row_nnz, n * n)) cols.insert(uniform_index(rng, 0, n * n - 1));
    for (Eigen::Index c : cols) t.emplace_back(r, c, normal(rng));
  }
  f2.setFromTriplets(t.begin(), t.end());
  return f2 * (norm / spectral_norm(f2));
}

inline Vector random_direction(std::mt19937_64& rng, Eigen::Index n, double norm) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v * (norm / v.norm());
}

/// System with prescribed R = 4 ||F1^-1||^2 ||F0|| ||F2||; ||F0|| drawn from [0.2, 1].
inline QuadraticSystem random_system_with_r(std::mt19937_64& rng, Eigen::Index n, double target_r,
                                            Eigen::Index row_nnz = 2) {
  SparseMatrix f1 = random_linear_part(rng, n, row_nnz);
  const double inv = 1.0 / singular_values(DenseMatrix(f1)).minCoeff();
  const double f0_norm = uniform(rng, 0.2, 1.0);
  Vector f0 = random_direction(rng, n, f0_norm);
  SparseMatrix f2 = random_quadratic_part(rng, n, row_nnz, target_r / (4.0 * inv * inv * f0_norm));
  return QuadraticSystem(std::move(f0), std::move(f1), std::move(f2));
}

/// System meeting (||F1^-1|| / (1 - ||F1^-1||)) (c+1) ||F2|| = u < 1 with u in [0.1, 0.9].
inline QuadraticSystem random_lemma2_system(std::mt19937_64& rng, Eigen::Index n, int c, Eigen::Index row_nnz = 2) {
  SparseMatrix f1 = random_linear_part(rng, n, row_nnz);
  const double inv = 1.0 / singular_values(DenseMatrix(f1)).minCoeff();
  const double u = uniform(rng, 0.1, 0.9);
  Vector f0 = random_direction(rng, n, uniform(rng, 0.05, 1.0));
  SparseMatrix f2 = random_quadratic_part(rng, n, row_nnz, u * (1.0 - inv) / (inv * (c + 1)));
  return QuadraticSystem(std::move(f0), std::move(f1), std::move(f2));
}

/// Random invertible M scaled so that ||M^-1|| is drawn from [0.05, 0.95].
inline SparseMatrix random_contraction_inverse(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  DenseMatrix m(n, n);
  double smin = 0.0;
  do {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = normal(rng);
    smin = singular_values(m).minCoeff();
  } while (smin < 1e-3);
  const double target_inv = uniform(rng, 0.05, 0.95);
  // ||(t M)^-1|| = 1 / (t smin)
  m *= 1.0 / (target_inv * smin);
  return m.sparseView();
}

}  // namespace qhpm

#endif  // QHPM_RANDOM_SYSTEMS_HPP_
