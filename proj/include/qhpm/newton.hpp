#ifndef QHPM_NEWTON_HPP_
#define QHPM_NEWTON_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "qhpm/error.hpp"
#include "qhpm/linalg.hpp"
#include "qhpm/quadratic_system.hpp"

namespace qhpm {

struct NewtonResult {
  Vector x_star;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct NewtonOptions {
  int max_iter = 100;
  int max_halvings = 30;
  double relative_tolerance = 1e-12;
};

/// J(x) = F1 + F2 (x (x) I + I (x) x).
inline SparseMatrix quadratic_jacobian(const QuadraticSystem& sys, const Vector& x) {
  const Eigen::Index n = sys.n();
  std::vector<Triplet> triplets;
  triplets.reserve(sys.f1().nonZeros() + 2 * sys.f2().nonZeros());
  for (Eigen::Index k = 0; k < sys.f1().outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sys.f1(), k); it; ++it) triplets.emplace_back(it.row(), it.col(), it.value());
  for (Eigen::Index col = 0; col < sys.f2().outerSize(); ++col) {
    const Eigen::Index j = col / n;
    const Eigen::Index k = col % n;
    for (SparseMatrix::InnerIterator it(sys.f2(), col); it; ++it) {
      triplets.emplace_back(it.row(), j, it.value() * x[k]);
      triplets.emplace_back(it.row(), k, it.value() * x[j]);
    }
  }
  SparseMatrix jac(n, n);
  jac.setFromTriplets(triplets.begin(), triplets.end());
  return jac;
}

/*
 * Damped Newton on G(x) = F0 + F1 x + F2 (x (x) x). A step is halved (at
 * most max_halvings times) while it fails to decrease ||G||. Converged means
 * ||G(x*)|| <= relative_tolerance * max(1, ||F0||).
 */
inline NewtonResult newton_solve(const QuadraticSystem& sys, const Vector& x0, const NewtonOptions& options = {}) {
  if (x0.size() != sys.n()) throw Error(ErrorKind::invalid_argument, "seed length differs from n");
  const double target = options.relative_tolerance * std::max(1.0, sys.f0().norm());
  NewtonResult result;
  result.x_star = x0;
  Vector g = sys.evaluate(result.x_star);
  result.residual = g.norm();
  while (result.residual > target) {
    if (result.iterations >= options.max_iter)
      throw NonConvergenceError("Newton did not converge in " + std::to_string(options.max_iter) + " iterations",
                                result.residual);
    const FactoredMatrix lu(quadratic_jacobian(sys, result.x_star));
    const Vector step = lu.solve(-g);
    double scale = 1.0;
    Vector trial = result.x_star + step;
    Vector g_trial = sys.evaluate(trial);
    for (int h = 0; h < options.max_halvings && !(g_trial.norm() < result.residual); ++h) {
      scale *= 0.5;
      trial = result.x_star + scale * step;
      g_trial = sys.evaluate(trial);
    }
    ++result.iterations;
    if (!(g_trial.norm() < result.residual)) {
      // No decrease even after halving: we are at the floating-point floor.
      break;
    }
    result.x_star = std::move(trial);
    g = std::move(g_trial);
    result.residual = g.norm();
  }
  result.converged = result.residual <= target;
  if (!result.converged)
    throw NonConvergenceError("Newton stalled at residual " + std::to_string(result.residual), result.residual);
  return result;
}

}  // namespace qhpm

#endif  // QHPM_NEWTON_HPP_
