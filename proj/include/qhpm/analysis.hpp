#ifndef QHPM_ANALYSIS_HPP_
#define QHPM_ANALYSIS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "qhpm/embedding.hpp"
#include "qhpm/error.hpp"
#include "qhpm/linalg.hpp"
#include "qhpm/quadratic_system.hpp"

namespace qhpm {

inline constexpr double kSqrt2Over2 = 0.70710678118654752440;
/// Constant used for the solver tolerance when (eta')^2 (1 - 2R^2) >= 1; any value below sqrt(5)/20 works.
inline constexpr double kLargeOverlapDeltaConstant = 0.1;
inline constexpr int kPolylogExponent = 3;

/// ||M^-1|| (1 - ||M^-1||^{i+1}) / (1 - ||M^-1||): bound on the inverse of the split chain.
inline double lemma1_bound(double inv_norm_m, int i) {
  if (!(inv_norm_m > 0.0 && inv_norm_m < 1.0))
    throw Error(ErrorKind::domain, "lemma 1 bound needs 0 < ||M^-1|| < 1");
  if (i < 0) throw Error(ErrorKind::invalid_argument, "chain index must be nonnegative");
  return inv_norm_m * (1.0 - std::pow(inv_norm_m, i + 1)) / (1.0 - inv_norm_m);
}

/*
 * The (i+1)-block upper-bidiagonal matrix with diagonal blocks
 * I^{(x)j} (x) M (x) I^{(x)(i-j)} and identity superdiagonal blocks.
 */
inline SparseMatrix split_chain_matrix(const SparseMatrix& m, int i) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::invalid_argument, "M must be square");
  const Eigen::Index n = m.rows();
  const Eigen::Index block = detail::int_pow(n, i + 1);
  std::vector<Triplet> triplets;
  for (int j = 0; j <= i; ++j) {
    detail::emit_kron(m, detail::int_pow(n, j), detail::int_pow(n, i - j), j * block, j * block, triplets);
    if (j < i) detail::emit_identity(block, j * block, (j + 1) * block, triplets);
  }
  SparseMatrix p(block * (i + 1), block * (i + 1));
  p.setFromTriplets(triplets.begin(), triplets.end());
  return p;
}

/// (kappa_F1 + 1) / (1 - ||F1^-1|| (1 + (c+1) ||F2||)).
inline double lemma2_kappa_bound(const SystemParams& p, int c) {
  if (!(p.inv_norm_f1 < 1.0)) throw HypothesisError("inv_norm_lt_one", "lemma 2 needs ||F1^-1|| < 1");
  const double zeta = lemma2_zeta(p, c);
  if (!(zeta < 1.0))
    throw HypothesisError("lemma2_zeta_lt_one", "lemma 2 needs (||F1^-1||/(1-||F1^-1||))(c+1)||F2|| < 1, got " +
                                                    std::to_string(zeta));
  return (p.kappa_f1 + 1.0) / (1.0 - g_factor(p, c));
}

/// (eta')^2 (1-2R^2) / ((eta')^2 (1-2R^2) + 4).
inline double lemma4_success_bound(double eta_prime, double big_r) {
  if (!(big_r < kSqrt2Over2)) throw HypothesisError("r_lt_sqrt2_over_2", "lemma 4 needs R < sqrt(2)/2");
  if (eta_prime < 0.0) throw Error(ErrorKind::invalid_argument, "eta' must be nonnegative");
  const double weight = eta_prime * eta_prime * (1.0 - 2.0 * big_r * big_r);
  if (std::isinf(weight)) return 1.0;
  return weight / (weight + 4.0);
}

/// Share of ||y||^2 carried by the y_0 block.
inline double empirical_success_probability(const Vector& solution_y, const EmbeddingLayout& layout) {
  const double total = solution_y.squaredNorm();
  if (!(total > 0.0)) throw Error(ErrorKind::zero_vector, "success probability of a zero vector");
  const double head = extract_block(solution_y, layout, solution_term()).squaredNorm();
  return std::clamp(head / total, 0.0, 1.0);
}

/// Linear-solver tolerance eta' sqrt(5(1-2R^2)) eps / 30, or 0.1 eps once (eta')^2 (1-2R^2) >= 1.
inline double qlss_delta(double eta_prime, double big_r, double epsilon) {
  if (!(big_r < kSqrt2Over2)) throw HypothesisError("r_lt_sqrt2_over_2", "solver tolerance needs R < sqrt(2)/2");
  const double q = 1.0 - 2.0 * big_r * big_r;
  if (eta_prime * eta_prime * q >= 1.0) return kLargeOverlapDeltaConstant * epsilon;
  return eta_prime * std::sqrt(5.0 * q) * epsilon / 30.0;
}

struct ComplexityInputs {
  double kappa_f1 = 1.0;
  double sparsity = 1.0;
  double n = 1.0;
  double norm_f1 = 0.0;
  double norm_f2 = 0.0;
  double g = 0.0;
  double big_r = 0.0;
  double epsilon = 0.0;
  double eta = 0.0;
};

/*
 * Magnitudes of the asymptotic query/gate formulas with every hidden
 * constant set to 1 and poly(log) read as (log2)^3, each log clamped below
 * at 1. Trend comparison only.
 */
struct ComplexityEstimate {
  double query = std::numeric_limits<double>::infinity();
  double gate_factor = std::numeric_limits<double>::infinity();
  double repetitions = std::numeric_limits<double>::infinity();
  bool unbounded = true;
  bool epsilon_out_of_range = false;
  int polylog_exponent = kPolylogExponent;
};

inline ComplexityEstimate complexity_estimate(const ComplexityInputs& in) {
  ComplexityEstimate out;
  out.epsilon_out_of_range = !(in.epsilon < 0.1);
  const double q = 1.0 - 2.0 * in.big_r * in.big_r;
  if (q > 0.0 && in.eta > 0.0 && std::isfinite(in.eta))
    out.repetitions = std::ceil(1.0 / std::sqrt(0.18 * in.eta * in.eta * q));
  const double one_minus_g = 1.0 - in.g;
  const double denom = in.epsilon * in.eta * one_minus_g * q * in.norm_f2;
  if (!(q > 0.0 && one_minus_g > 0.0 && denom > 0.0 && std::isfinite(denom) && in.epsilon > 0.0)) return out;
  const double arg = in.norm_f1 / denom;
  if (!std::isfinite(arg)) return out;
  const auto polylog = [](double x) { return std::pow(std::max(std::log2(x), 1.0), kPolylogExponent); };
  out.query = in.kappa_f1 * in.sparsity * polylog(arg) / (in.eta * one_minus_g * std::sqrt(q));
  out.gate_factor = polylog(in.n * arg);
  out.unbounded = !std::isfinite(out.query);
  return out;
}

inline ComplexityEstimate complexity_estimate(const SystemParams& p, const QuadraticSystem& sys, int c,
                                              double epsilon, double eta) {
  ComplexityInputs in;
  in.kappa_f1 = p.kappa_f1;
  in.sparsity = static_cast<double>(sys.sparsity());
  in.n = static_cast<double>(sys.n());
  in.norm_f1 = p.norm_f1;
  in.norm_f2 = p.norm_f2;
  in.g = g_factor(p, c);
  in.big_r = p.big_r;
  in.epsilon = epsilon;
  in.eta = eta;
  return complexity_estimate(in);
}

/// || psi/||psi|| - phi/||phi|| ||; at most 2 ||psi - phi|| / alpha_lower when ||psi|| >= alpha_lower.
inline double vector_lemma_ratio_check(const Vector& psi, const Vector& phi, double alpha_lower) {
  if (psi.size() != phi.size()) throw Error(ErrorKind::invalid_argument, "vector lengths differ");
  const double npsi = psi.norm();
  const double nphi = phi.norm();
  if (npsi == 0.0 || nphi == 0.0) throw Error(ErrorKind::zero_vector, "normalizing a zero vector");
  if (!(alpha_lower > 0.0) || npsi < alpha_lower)
    throw Error(ErrorKind::precondition_violated, "need ||psi|| >= alpha_lower > 0");
  return (psi / npsi - phi / nphi).norm();
}

/*
 * Unit vectors psi, phi whose leading `head_size` entries form the weighted
 * |0>-block. Returns the distance between the normalized head blocks; at
 * most 2 delta / (alpha - delta) when ||psi - phi|| <= delta < alpha and the
 * head weight of psi is at least alpha.
 */
inline double block_projection_check(const Vector& psi, const Vector& phi, Eigen::Index head_size, double alpha,
                                     double delta) {
  if (psi.size() != phi.size() || head_size < 1 || head_size > psi.size())
    throw Error(ErrorKind::invalid_argument, "inconsistent block shapes");
  if (std::abs(psi.norm() - 1.0) > 1e-12 || std::abs(phi.norm() - 1.0) > 1e-12)
    throw Error(ErrorKind::precondition_violated, "psi and phi must be unit vectors");
  if (!(delta >= 0.0 && delta < alpha)) throw Error(ErrorKind::precondition_violated, "need 0 <= delta < alpha");
  if ((psi - phi).norm() > delta) throw Error(ErrorKind::precondition_violated, "||psi - phi|| exceeds delta");
  const Vector head_psi = psi.head(head_size);
  const Vector head_phi = phi.head(head_size);
  if (head_psi.norm() < alpha) throw Error(ErrorKind::precondition_violated, "head weight of psi is below alpha");
  if (head_phi.norm() == 0.0) throw Error(ErrorKind::zero_vector, "phi has an empty head block");
  return (head_psi / head_psi.norm() - head_phi / head_phi.norm()).norm();
}

}  // namespace qhpm

#endif  // QHPM_ANALYSIS_HPP_
