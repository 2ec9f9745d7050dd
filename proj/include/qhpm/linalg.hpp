#ifndef QHPM_LINALG_HPP_
#define QHPM_LINALG_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "qhpm/error.hpp"

namespace qhpm {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Matrices whose larger side is at most this size get exact dense SVD norms.
inline constexpr Eigen::Index kDenseNormLimit = 512;
inline constexpr double kPowerIterationTolerance = 1e-12;
inline constexpr int kPowerIterationCap = 10000;

enum class NormMethod { automatic, dense, power };

inline bool all_finite(const SparseMatrix& m) {
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (!std::isfinite(it.value())) return false;
  return true;
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

/// Sparse LU factorization of a square matrix, optionally with its transpose.
class FactoredMatrix {
 public:
  using Solver = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

  explicit FactoredMatrix(const SparseMatrix& m, bool with_transpose = false)
      : rows_(m.rows()), forward_(factor(m)) {
    if (with_transpose) {
      SparseMatrix t = m.transpose();
      transposed_ = factor(t);
    }
  }

  Eigen::Index rows() const { return rows_; }
  bool has_transpose() const { return transposed_ != nullptr; }

  Vector solve(const Vector& rhs) const { return checked_solve(*forward_, rhs); }

  Vector solve_transpose(const Vector& rhs) const {
    if (!transposed_) throw Error(ErrorKind::invalid_argument, "transpose factorization not requested");
    return checked_solve(*transposed_, rhs);
  }

 private:
  static std::unique_ptr<Solver> factor(const SparseMatrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::invalid_argument, "factorization needs a square matrix");
    auto solver = std::make_unique<Solver>();
    SparseMatrix compressed = m;
    compressed.makeCompressed();
    solver->analyzePattern(compressed);
    solver->factorize(compressed);
    if (solver->info() != Eigen::Success)
      throw Error(ErrorKind::singular_matrix, "sparse LU failed: " + solver->lastErrorMessage());
    return solver;
  }

  static Vector checked_solve(const Solver& solver, const Vector& rhs) {
    Vector x = solver.solve(rhs);
    if (solver.info() != Eigen::Success || !x.allFinite())
      throw Error(ErrorKind::singular_matrix, "sparse LU solve produced non-finite values");
    return x;
  }

  Eigen::Index rows_;
  std::unique_ptr<Solver> forward_;
  std::unique_ptr<Solver> transposed_;
};

namespace detail {

inline Vector seeded_unit_vector(Eigen::Index size) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = dist(rng);
  return v / v.norm();
}

// Largest eigenvalue of a symmetric positive semidefinite operator given by apply().
template <typename Apply>
double dominant_eigenvalue(Eigen::Index size, Apply apply, double tol, int max_iter) {
  Vector v = seeded_unit_vector(size);
  double lambda = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    Vector w = apply(v);
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (iter > 0 && std::abs(next - lambda) <= tol * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

}  // namespace detail

inline Eigen::VectorXd singular_values(const DenseMatrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::BDCSVD<DenseMatrix> svd(m);
  return svd.singularValues();
}

/// Largest singular value by power iteration on the smaller Gram matrix.
inline double spectral_norm_power(const SparseMatrix& m, double tol = kPowerIterationTolerance,
                                  int max_iter = kPowerIterationCap) {
  if (m.nonZeros() == 0) return 0.0;
  const SparseMatrix mt = m.transpose();
  double lambda = 0.0;
  if (m.cols() <= m.rows()) {
    lambda = detail::dominant_eigenvalue(m.cols(), [&](const Vector& v) -> Vector { return mt * (m * v); },
                                         tol, max_iter);
  } else {
    lambda = detail::dominant_eigenvalue(m.rows(), [&](const Vector& v) -> Vector { return m * (mt * v); },
                                         tol, max_iter);
  }
  return std::sqrt(std::max(lambda, 0.0));
}

inline double spectral_norm_dense(const SparseMatrix& m) {
  if (m.nonZeros() == 0) return 0.0;
  return singular_values(DenseMatrix(m))(0);
}

inline double spectral_norm(const SparseMatrix& m, NormMethod method = NormMethod::automatic) {
  if (method == NormMethod::automatic)
    method = std::max(m.rows(), m.cols()) <= kDenseNormLimit ? NormMethod::dense : NormMethod::power;
  return method == NormMethod::dense ? spectral_norm_dense(m) : spectral_norm_power(m);
}

/// Smallest singular value by inverse iteration through a factorization
/// that includes the transpose.
inline double min_singular_value_inverse(const FactoredMatrix& lu, double tol = kPowerIterationTolerance,
                                         int max_iter = kPowerIterationCap) {
  const double lambda = detail::dominant_eigenvalue(
      lu.rows(), [&](const Vector& v) -> Vector { return lu.solve(lu.solve_transpose(v)); }, tol, max_iter);
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::singular_matrix, "inverse iteration did not produce a positive eigenvalue");
  return 1.0 / std::sqrt(lambda);
}

/// ||m^{-1}|| = 1 / sigma_min(m). Dense SVD for small matrices, inverse
/// iteration with the supplied factorization otherwise.
inline double inverse_norm(const SparseMatrix& m, const FactoredMatrix& lu,
                           NormMethod method = NormMethod::automatic) {
  if (method == NormMethod::automatic) method = m.rows() <= kDenseNormLimit ? NormMethod::dense : NormMethod::power;
  if (method == NormMethod::dense) {
    const Eigen::VectorXd sv = singular_values(DenseMatrix(m));
    const double smin = sv(sv.size() - 1);
    if (!(smin > sv(0) * 1e-14)) throw Error(ErrorKind::singular_matrix, "smallest singular value is zero");
    return 1.0 / smin;
  }
  return 1.0 / min_singular_value_inverse(lu);
}

/// a (x) b with index i * b.size() + j.
inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

/// F2 * (a (x) b) for an n x n^2 matrix F2, without forming the Kronecker vector.
inline Vector apply_quadratic(const SparseMatrix& f2, const Vector& a, const Vector& b) {
  const Eigen::Index n = a.size();
  Vector out = Vector::Zero(f2.rows());
  for (Eigen::Index col = 0; col < f2.outerSize(); ++col) {
    const double weight = a[col / n] * b[col % n];
    if (weight == 0.0) continue;
    for (SparseMatrix::InnerIterator it(f2, col); it; ++it) out[it.row()] += it.value() * weight;
  }
  return out;
}

/// Maximum nonzeros over every row and every column.
inline Eigen::Index max_row_col_nonzeros(const SparseMatrix& m) {
  Eigen::VectorXi rows = Eigen::VectorXi::Zero(m.rows());
  Eigen::Index best = 0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    Eigen::Index count = 0;
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      if (it.value() == 0.0) continue;
      ++rows[it.row()];
      ++count;
    }
    best = std::max(best, count);
  }
  return std::max<Eigen::Index>(best, rows.size() ? rows.maxCoeff() : 0);
}

inline Eigen::Index max_row_nonzeros(const SparseMatrix& m) {
  Eigen::VectorXi rows = Eigen::VectorXi::Zero(m.rows());
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (it.value() != 0.0) ++rows[it.row()];
  return rows.size() ? rows.maxCoeff() : 0;
}

}  // namespace qhpm

#endif  // QHPM_LINALG_HPP_
