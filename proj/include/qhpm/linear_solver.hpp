#ifndef QHPM_LINEAR_SOLVER_HPP_
#define QHPM_LINEAR_SOLVER_HPP_

#include <cmath>
#include <string>

#include <unsupported/Eigen/IterativeSolvers>

#include "qhpm/embedding.hpp"
#include "qhpm/error.hpp"
#include "qhpm/linalg.hpp"

namespace qhpm {

enum class SolveMethod { direct, iterative, automatic };

inline constexpr Eigen::Index kDirectSolveLimit = 50000;
inline constexpr Eigen::Index kDenseConditionLimit = 2048;
inline constexpr double kConditionTolerance = 1e-6;
inline constexpr Eigen::Index kGmresRestart = 60;

inline const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::direct: return "direct";
    case SolveMethod::iterative: return "iterative";
    case SolveMethod::automatic: return "auto";
  }
  return "?";
}

struct SolveOutcome {
  Vector solution_y;
  double residual_rel = 0.0;
  SolveMethod method = SolveMethod::direct;
  Eigen::Index iterations = 0;
};

/// ||A y - b|| / ||b||, or ||A y|| when b = 0.
inline double relative_residual(const SparseMatrix& a, const Vector& y, const Vector& b) {
  const double denom = b.norm();
  const double r = (a * y - b).norm();
  return denom > 0.0 ? r / denom : r;
}

inline SolveOutcome solve(const SparseMatrix& a, const Vector& b, SolveMethod method = SolveMethod::automatic,
                          double tol = 1e-12) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw Error(ErrorKind::invalid_argument, "A must be square with b of matching length");
  if (!(tol > 0.0 && tol <= 1e-2)) throw Error(ErrorKind::invalid_argument, "tol must lie in (0, 1e-2]");
  if (method == SolveMethod::automatic)
    method = a.rows() <= kDirectSolveLimit ? SolveMethod::direct : SolveMethod::iterative;

  SolveOutcome out;
  out.method = method;
  if (method == SolveMethod::direct) {
    FactoredMatrix lu(a);
    out.solution_y = lu.solve(b);
  } else {
    Eigen::GMRES<SparseMatrix, Eigen::IdentityPreconditioner> gmres;
    gmres.set_restart(std::min<Eigen::Index>(kGmresRestart, std::max<Eigen::Index>(a.rows(), 1)));
    gmres.setTolerance(tol);
    gmres.setMaxIterations(50 * a.rows());
    gmres.compute(a);
    out.solution_y = gmres.solve(b);
    out.iterations = gmres.iterations();
    if (!out.solution_y.allFinite()) throw Error(ErrorKind::singular_matrix, "GMRES produced non-finite values");
    if (gmres.info() != Eigen::Success) {
      throw NonConvergenceError("GMRES stopped after " + std::to_string(gmres.iterations()) + " iterations",
                                relative_residual(a, out.solution_y, b));
    }
  }
  out.residual_rel = relative_residual(a, out.solution_y, b);
  return out;
}

inline SolveOutcome solve(const EmbeddedSystem& system, SolveMethod method = SolveMethod::automatic,
                          double tol = 1e-12) {
  return solve(system.matrix_a, system.vector_b, method, tol);
}

/*
 * sigma_max / sigma_min. Exact dense SVD up to 2048 rows; above that, power
 * iteration on A^T A for sigma_max and inverse iteration through an LU of A
 * and A^T for sigma_min, both to relative tolerance 1e-6.
 */
inline double estimate_condition_number(const SparseMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorKind::invalid_argument, "condition number needs a square matrix");
  if (m.rows() <= kDenseConditionLimit) {
    const Eigen::VectorXd sv = singular_values(DenseMatrix(m));
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > smax * 1e-15)) throw Error(ErrorKind::singular_matrix, "matrix is numerically singular");
    return smax / smin;
  }
  const FactoredMatrix lu(m, /*with_transpose=*/true);
  const double smax = spectral_norm_power(m, kConditionTolerance);
  const double smin = min_singular_value_inverse(lu, kConditionTolerance);
  return smax / smin;
}

}  // namespace qhpm

#endif  // QHPM_LINEAR_SOLVER_HPP_
