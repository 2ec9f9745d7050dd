#ifndef QHPM_QUADRATIC_SYSTEM_HPP_
#define QHPM_QUADRATIC_SYSTEM_HPP_

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "qhpm/error.hpp"
#include "qhpm/linalg.hpp"

namespace qhpm {

/*
 * The system F0 + F1 x + F2 (x (x) x) = 0 over R^n.
 *
 * F2 is n x n^2; column j*n + k multiplies x_j * x_k. Construction validates
 * shapes and finiteness and factors F1 once, so a live object always has an
 * invertible linear part. Copies share the factorization.
 */
class QuadraticSystem {
 public:
  QuadraticSystem(Vector f0, SparseMatrix f1, SparseMatrix f2, double rescale_factor = 1.0,
                  std::optional<Eigen::Index> declared_sparsity = std::nullopt)
      : f0_(std::move(f0)), f1_(std::move(f1)), f2_(std::move(f2)), rescale_factor_(rescale_factor) {
    const Eigen::Index n = f0_.size();
    if (n < 1) throw Error(ErrorKind::invalid_argument, "system dimension must be positive");
    if (f1_.rows() != n || f1_.cols() != n)
      throw Error(ErrorKind::invalid_argument, "F1 must be n x n");
    if (f2_.rows() != n || f2_.cols() != n * n)
      throw Error(ErrorKind::invalid_argument, "F2 must be n x n^2");
    if (!(rescale_factor_ > 0.0) || !std::isfinite(rescale_factor_))
      throw Error(ErrorKind::invalid_argument, "rescale factor must be positive");
    if (!all_finite(f0_) || !all_finite(f1_) || !all_finite(f2_))
      throw Error(ErrorKind::non_finite, "system coefficients must be finite");
    f1_.makeCompressed();
    f2_.makeCompressed();
    sparsity_ = std::max<Eigen::Index>(1, std::max(max_row_col_nonzeros(f1_), max_row_col_nonzeros(f2_)));
    if (declared_sparsity && *declared_sparsity < sparsity_)
      throw Error(ErrorKind::invalid_argument, "declared sparsity " + std::to_string(*declared_sparsity) +
                                                   " is below the measured " + std::to_string(sparsity_));
    f1_lu_ = std::make_shared<const FactoredMatrix>(f1_, /*with_transpose=*/true);
  }

  Eigen::Index n() const { return f0_.size(); }
  const Vector& f0() const { return f0_; }
  const SparseMatrix& f1() const { return f1_; }
  const SparseMatrix& f2() const { return f2_; }
  Eigen::Index sparsity() const { return sparsity_; }
  double rescale_factor() const { return rescale_factor_; }
  const FactoredMatrix& f1_factorization() const { return *f1_lu_; }

  /// F0 + F1 x + F2 (x (x) x).
  Vector evaluate(const Vector& x) const { return f0_ + f1_ * x + apply_quadratic(f2_, x, x); }

  double residual_norm(const Vector& x) const { return evaluate(x).norm(); }

 private:
  Vector f0_;
  SparseMatrix f1_;
  SparseMatrix f2_;
  double rescale_factor_;
  Eigen::Index sparsity_ = 0;
  std::shared_ptr<const FactoredMatrix> f1_lu_;
};

struct SystemParams {
  double alpha = 0.0;       // ||F1^-1|| ||F0||
  double beta_param = 0.0;  // ||F1^-1|| ||F2||
  double big_r = 0.0;       // 4 alpha beta
  double inv_norm_f1 = 0.0;
  double norm_f1 = 0.0;
  double norm_f0 = 0.0;
  double norm_f2 = 0.0;
  double kappa_f1 = 1.0;
  double g_factor = 0.0;  // ||F1^-1|| (1 + (c+1) ||F2||) for order_c
  double zeta_rescale = 1.0;
  int order_c = 0;
};

/// G = ||F1^-1|| (1 + (c+1) ||F2||).
inline double g_factor(const SystemParams& p, int c) { return p.inv_norm_f1 * (1.0 + (c + 1) * p.norm_f2); }

/// The Lemma-2 contraction ratio (||F1^-1|| / (1 - ||F1^-1||)) (c+1) ||F2||.
/// Infinite when ||F1^-1|| >= 1.
inline double lemma2_zeta(const SystemParams& p, int c) {
  if (p.inv_norm_f1 >= 1.0) return std::numeric_limits<double>::infinity();
  return p.inv_norm_f1 / (1.0 - p.inv_norm_f1) * (c + 1) * p.norm_f2;
}

inline SystemParams compute_params(const QuadraticSystem& sys, int c, NormMethod method = NormMethod::automatic) {
  if (c < 0) throw Error(ErrorKind::invalid_argument, "order c must be nonnegative");
  SystemParams p;
  p.order_c = c;
  p.norm_f0 = sys.f0().norm();
  p.norm_f1 = spectral_norm(sys.f1(), method);
  p.norm_f2 = spectral_norm(sys.f2(), method);
  p.inv_norm_f1 = inverse_norm(sys.f1(), sys.f1_factorization(), method);
  p.alpha = p.inv_norm_f1 * p.norm_f0;
  p.beta_param = p.inv_norm_f1 * p.norm_f2;
  p.big_r = 4.0 * p.alpha * p.beta_param;
  // kappa >= 1 holds mathematically; clamp the rounding in the last bit.
  p.kappa_f1 = std::max(1.0, p.norm_f1 * p.inv_norm_f1);
  p.g_factor = g_factor(p, c);
  p.zeta_rescale = sys.rescale_factor();
  return p;
}

struct HypothesisReport {
  bool r_lt_one = false;
  bool r_lt_sqrt2_over_2 = false;
  bool inv_norm_lt_one = false;
  bool g_lt_one = false;
  bool r_geq_norm_f0 = false;
  bool lemma2_zeta_lt_one = false;
  bool epsilon_lt_tenth = false;

  bool operator==(const HypothesisReport&) const = default;

  /// All of the main-theorem preconditions.
  bool theorem_holds() const { return epsilon_lt_tenth && inv_norm_lt_one && g_lt_one && r_lt_sqrt2_over_2; }
  bool lemma2_holds() const { return inv_norm_lt_one && lemma2_zeta_lt_one; }
  bool lemma4_holds() const { return inv_norm_lt_one && r_lt_sqrt2_over_2; }
};

inline HypothesisReport check_hypotheses(const SystemParams& p, int c, double epsilon) {
  HypothesisReport h;
  h.r_lt_one = p.big_r < 1.0;
  h.r_lt_sqrt2_over_2 = p.big_r < std::sqrt(2.0) / 2.0;
  h.inv_norm_lt_one = p.inv_norm_f1 < 1.0;
  h.g_lt_one = g_factor(p, c) < 1.0;
  h.r_geq_norm_f0 = p.big_r >= p.norm_f0;
  h.lemma2_zeta_lt_one = lemma2_zeta(p, c) < 1.0;
  h.epsilon_lt_tenth = epsilon < 0.1;
  return h;
}

struct RescaledSystem {
  QuadraticSystem system;
  double factor = 1.0;
};

/*
 * Substitutes u = zeta x: F0' = zeta F0, F1' = F1, F2' = F2 / zeta. R is
 * invariant while ||F0'|| = zeta ||F0||, so zeta = R / ||F0|| brings the
 * system to R >= ||F0'||. Solutions map back as x = u / zeta.
 */
inline RescaledSystem rescale_system(const QuadraticSystem& sys) {
  const double norm_f0 = sys.f0().norm();
  if (norm_f0 == 0.0) return {sys, 1.0};
  const SystemParams p = compute_params(sys, 0);
  if (p.big_r >= norm_f0) return {sys, 1.0};
  if (p.big_r == 0.0)
    throw Error(ErrorKind::infeasible_rescale, "R = 0 with nonzero F0; no zeta > 0 achieves R >= zeta ||F0||");
  const double zeta = p.big_r / norm_f0;
  QuadraticSystem scaled(zeta * sys.f0(), sys.f1(), sys.f2() / zeta, sys.rescale_factor() * zeta);
  return {std::move(scaled), zeta};
}

}  // namespace qhpm

#endif  // QHPM_QUADRATIC_SYSTEM_HPP_
