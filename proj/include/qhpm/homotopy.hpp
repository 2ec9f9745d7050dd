#ifndef QHPM_HOMOTOPY_HPP_
#define QHPM_HOMOTOPY_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "qhpm/error.hpp"
#include "qhpm/quadratic_system.hpp"

namespace qhpm {

inline constexpr double kDivergenceThreshold = 1e100;
inline constexpr int kMinOrder = 1;
inline constexpr int kMaxOrder = 64;
inline constexpr int kMaxCatalanIndex = 30;

/// Terms nu_0..nu_c of the homotopy expansion and their sum at p = 1.
struct HomotopySeries {
  int order_c = 0;
  std::vector<Vector> nus;
  Vector x_tilde;
};

/*
 * Sequential recursion:
 *   F1 nu_0 = -F0
 *   F1 nu_i = -F2 sum_{j<i} nu_j (x) nu_{i-1-j},   i = 1..c
 * Every step reuses the cached F1 factorization; the Kronecker pairs go
 * through F2's sparsity one at a time.
 */
inline HomotopySeries hpm_solve(const QuadraticSystem& sys, int c) {
  if (c < 0) throw Error(ErrorKind::invalid_argument, "order c must be nonnegative");
  const FactoredMatrix& lu = sys.f1_factorization();
  HomotopySeries series;
  series.order_c = c;
  series.nus.reserve(c + 1);
  series.nus.push_back(lu.solve(-sys.f0()));
  for (int i = 1; i <= c; ++i) {
    Vector coupling = Vector::Zero(sys.n());
    for (int j = 0; j < i; ++j) coupling += apply_quadratic(sys.f2(), series.nus[j], series.nus[i - 1 - j]);
    Vector next = lu.solve(-coupling);
    if (!(next.norm() <= kDivergenceThreshold))
      throw Error(ErrorKind::overflow, "||nu_" + std::to_string(i) + "|| exceeds 1e100; the series diverges");
    series.nus.push_back(std::move(next));
  }
  series.x_tilde = Vector::Zero(sys.n());
  for (const Vector& nu : series.nus) series.x_tilde += nu;
  return series;
}

/*
 * Smallest order c with the truncation guarantee. With eta supplied the
 * target is log_{1/R}(4 alpha / (eta R eps (1-R))), otherwise
 * log_{1/R}(alpha / (eps (1-R))). Clamped to [1, 64].
 */
inline int choose_order(const SystemParams& p, double epsilon, std::optional<double> eta = std::nullopt) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
  if (eta && !(*eta > 0.0)) throw Error(ErrorKind::invalid_argument, "eta must be positive");
  const double r = p.big_r;
  if (r >= 1.0) throw Error(ErrorKind::divergent_series, "R >= 1; the homotopy series need not converge");
  if (r <= 0.0 || p.alpha <= 0.0) return kMinOrder;
  const double target = eta ? 4.0 * p.alpha / (*eta * r * epsilon * (1.0 - r)) : p.alpha / (epsilon * (1.0 - r));
  const double order = std::ceil(std::log(target) / std::log(1.0 / r));
  if (!(order >= kMinOrder)) return kMinOrder;
  if (order >= kMaxOrder) return kMaxOrder;
  return static_cast<int>(order);
}

/// gamma_i = C(2i, i) / (i + 1).
inline std::uint64_t catalan(int i) {
  if (i < 0) throw Error(ErrorKind::invalid_argument, "catalan index must be nonnegative");
  if (i > kMaxCatalanIndex) throw Error(ErrorKind::overflow, "catalan index above 30");
  // gamma_{k+1} = gamma_k * 2(2k+1) / (k+2); the product stays exact in 64 bits for k < 30.
  std::uint64_t value = 1;
  for (int k = 0; k < i; ++k) value = value * 2 * (2 * k + 1) / (k + 2);
  return value;
}

/// alpha R^i.
inline double nu_norm_bound(const SystemParams& p, int i) {
  if (i < 0) throw Error(ErrorKind::invalid_argument, "index must be nonnegative");
  return p.alpha * std::pow(p.big_r, i);
}

/// alpha R^{c+1} / (1 - R): bound on the distance from x_tilde to the series limit.
inline double truncation_error_bound(const SystemParams& p, int c) {
  if (c < 0) throw Error(ErrorKind::invalid_argument, "order c must be nonnegative");
  if (p.big_r >= 1.0) throw Error(ErrorKind::divergent_series, "R >= 1; no truncation bound");
  return p.alpha * std::pow(p.big_r, c + 1) / (1.0 - p.big_r);
}

}  // namespace qhpm

#endif  // QHPM_HOMOTOPY_HPP_
