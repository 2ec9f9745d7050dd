#ifndef QHPM_VERIFICATION_HPP_
#define QHPM_VERIFICATION_HPP_

#include <chrono>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "qhpm/analysis.hpp"
#include "qhpm/embedding.hpp"
#include "qhpm/format.hpp"
#include "qhpm/homotopy.hpp"
#include "qhpm/linear_solver.hpp"
#include "qhpm/newton.hpp"
#include "qhpm/problem_io.hpp"
#include "qhpm/random_systems.hpp"

namespace qhpm {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline bool all_passed(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

// Published values for the two-variable example at c = 2.
inline const Vector& appendix_x_tilde() {
  static const Vector v = (Vector(2) << -4.8765625e-2, 5.1265625e-2).finished();
  return v;
}
inline const Vector& appendix_x_star() {
  static const Vector v = (Vector(2) << -4.8764858e-2, 5.1266422e-2).finished();
  return v;
}
inline constexpr double kAppendixError = 1.1061184e-6;
inline constexpr double kAppendixProbabilityFloor = 0.02797;

/*
 * The printed 8 x 8 block matrix and right-hand side for the example,
 * rebuilt densely with Kronecker products. Block columns, in order:
 * y0 | nu0 nu0 | F0 nu0 | nu0 nu1 | nu1 nu0 | nu0^3 | F0 nu0^2 | F0^2 nu0.
 */
inline DenseMatrix appendix_printed_matrix(const QuadraticSystem& sys) {
  const DenseMatrix f1 = DenseMatrix(sys.f1());
  const DenseMatrix f2 = DenseMatrix(sys.f2());
  const DenseMatrix i2 = DenseMatrix::Identity(2, 2);
  const DenseMatrix i4 = DenseMatrix::Identity(4, 4);
  const std::vector<Eigen::Index> off{0, 2, 6, 10, 14, 18, 26, 34, 42};
  DenseMatrix a = DenseMatrix::Zero(42, 42);
  auto put = [&](int row_block, int col_block, const DenseMatrix& m) {
    a.block(off[row_block], off[col_block], m.rows(), m.cols()) = m;
  };
  put(0, 0, f1);
  put(0, 1, f2);
  put(0, 3, f2);
  put(0, 4, f2);
  put(1, 1, Eigen::kroneckerProduct(f1, i2).eval());
  put(1, 2, i4);
  put(2, 2, Eigen::kroneckerProduct(i2, f1).eval());
  put(3, 3, Eigen::kroneckerProduct(i2, f1).eval());
  put(3, 5, Eigen::kroneckerProduct(i2, f2).eval());
  put(4, 4, Eigen::kroneckerProduct(f1, i2).eval());
  put(4, 5, Eigen::kroneckerProduct(f2, i2).eval());
  put(5, 5, Eigen::kroneckerProduct(f1, i4).eval());
  put(5, 6, DenseMatrix::Identity(8, 8));
  put(6, 6, Eigen::kroneckerProduct(Eigen::kroneckerProduct(i2, f1).eval(), i2).eval());
  put(6, 7, DenseMatrix::Identity(8, 8));
  put(7, 7, Eigen::kroneckerProduct(i4, f1).eval());
  return a;
}

inline Vector appendix_printed_rhs(const QuadraticSystem& sys) {
  const Vector& f0 = sys.f0();
  Vector b = Vector::Zero(42);
  b.segment(0, 2) = -f0;
  b.segment(6, 4) = -Eigen::kroneckerProduct(f0, f0).eval();
  b.segment(34, 8) = -Eigen::kroneckerProduct(Eigen::kroneckerProduct(f0, f0).eval(), f0).eval();
  return b;
}

namespace detail {

inline std::string sci(double v) {
  std::ostringstream os;
  os.precision(10);
  os << std::scientific << v;
  return os.str();
}

}  // namespace detail

/// Golden solve: N = 42, printed A and b, y0 within 1e-9, under a second.
inline CheckResult appendix_golden_solve() {
  CheckResult out{"appendix golden solve", false, ""};
  const auto start = std::chrono::steady_clock::now();
  const QuadraticSystem sys = appendix_system();
  const EmbeddedSystem emb = assemble(sys, 2);
  const SolveOutcome sol = solve(emb, SolveMethod::direct);
  const Vector y0 = extract_block(sol.solution_y, emb.layout, solution_term());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double matrix_gap = (DenseMatrix(emb.matrix_a) - appendix_printed_matrix(sys)).cwiseAbs().maxCoeff();
  const double rhs_gap = (emb.vector_b - appendix_printed_rhs(sys)).cwiseAbs().maxCoeff();
  const double y0_gap = (y0 - appendix_x_tilde()).cwiseAbs().maxCoeff();
  out.passed = emb.layout.total_dim_n == 42 && matrix_gap <= 1e-15 && rhs_gap <= 1e-15 && y0_gap <= 1e-9 && seconds < 1.0;
  out.detail = "N=" + std::to_string(emb.layout.total_dim_n) + " max|A-printed|=" + detail::sci(matrix_gap) +
               " max|b-printed|=" + detail::sci(rhs_gap) + " y0=" + format_vector(y0) +
               " max|y0-published|=" + detail::sci(y0_gap) + " (tol 1e-9) under 1s: " + (seconds < 1.0 ? "yes" : "no");
  return out;
}

/// Oracle root within 5e-9 of the published x*, ||x* - x_tilde|| within 1e-9 of 1.1061184e-6.
inline CheckResult appendix_error() {
  CheckResult out{"appendix oracle error", false, ""};
  const QuadraticSystem sys = appendix_system();
  const HomotopySeries series = hpm_solve(sys, 2);
  const NewtonResult oracle = newton_solve(sys, series.nus[0]);
  const EmbeddedSystem emb = assemble(sys, 2);
  const Vector x_tilde = extract_block(solve(emb, SolveMethod::direct).solution_y, emb.layout, solution_term());
  const double root_gap = (oracle.x_star - appendix_x_star()).cwiseAbs().maxCoeff();
  const double err = (oracle.x_star - x_tilde).norm();
  out.passed = root_gap <= 5e-9 && std::abs(err - kAppendixError) <= 1e-9;
  out.detail = "x*=" + format_vector(oracle.x_star) + " max|x*-published|=" + detail::sci(root_gap) +
               " (tol 5e-9) ||x*-x~||=" + detail::sci(err) + " vs 1.1061184e-06 (tol 1e-9)";
  return out;
}

inline CheckResult appendix_success_probability() {
  CheckResult out{"appendix success probability", false, ""};
  const QuadraticSystem sys = appendix_system();
  const SystemParams p = compute_params(sys, 2);
  const EmbeddedSystem emb = assemble(sys, 2);
  const Vector y = solve(emb, SolveMethod::direct).solution_y;
  const double prob = empirical_success_probability(y, emb.layout);
  const double eta_prime = extract_block(y, emb.layout, solution_term()).norm() / p.big_r;
  const double bound = lemma4_success_bound(eta_prime, p.big_r);
  out.passed = prob >= kAppendixProbabilityFloor && prob >= bound;
  out.detail = "p=" + detail::sci(prob) + " lemma4 bound=" + detail::sci(bound) + " floor=0.02797";
  return out;
}

/// Solved y0 equals the recursion sum; the packed recursion vector solves A y = b.
inline CheckResult embedding_equivalence_suite(std::uint64_t seed, int count = 100) {
  CheckResult out{"embedding-recursion equivalence", false, ""};
  const auto start = std::chrono::steady_clock::now();
  int violations = 0;
  double worst_y0 = 0.0;
  double worst_packed = 0.0;
  for (int k = 0; k < count; ++k) {
    auto rng = instance_rng(seed, k);
    const Eigen::Index n = uniform_index(rng, 2, 4);
    const int c = static_cast<int>(uniform_index(rng, 1, 4));
    const QuadraticSystem sys = random_system_with_r(rng, n, uniform(rng, 0.05, 0.6));
    const HomotopySeries series = hpm_solve(sys, c);
    const EmbeddedSystem emb = assemble(sys, c);
    const Vector y = solve(emb, SolveMethod::direct).solution_y;
    const Vector y0 = extract_block(y, emb.layout, solution_term());
    const double y0_rel = (y0 - series.x_tilde).norm() / series.x_tilde.norm();
    const Vector packed = pack_series(sys, series, emb.layout);
    const double packed_rel = (emb.matrix_a * packed - emb.vector_b).norm() / emb.vector_b.norm();
    worst_y0 = std::max(worst_y0, y0_rel);
    worst_packed = std::max(worst_packed, packed_rel);
    if (!(y0_rel <= 1e-9) || !(packed_rel <= 1e-10)) ++violations;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.passed = violations == 0 && seconds < 60.0;
  out.detail = std::to_string(count) + " systems, violations=" + std::to_string(violations) +
               " worst y0 rel=" + detail::sci(worst_y0) + " (tol 1e-9) worst packed residual=" +
               detail::sci(worst_packed) + " (tol 1e-10) under 60s: " + (seconds < 60.0 ? "yes" : "no");
  return out;
}

/// Dense ||P^-1|| against the split-chain bound.
inline CheckResult lemma1_suite(std::uint64_t seed, int count = 200) {
  CheckResult out{"lemma 1 split-chain inverse bound", false, ""};
  int violations = 0;
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    auto rng = instance_rng(seed ^ 0x1111, k);
    const Eigen::Index n = uniform_index(rng, 2, 3);
    const int i = static_cast<int>(uniform_index(rng, 0, 3));
    const SparseMatrix m = random_contraction_inverse(rng, n);
    const double inv_m = 1.0 / singular_values(DenseMatrix(m)).minCoeff();
    const DenseMatrix p_inv = DenseMatrix(split_chain_matrix(m, i)).inverse();
    const double measured = singular_values(p_inv)(0);
    const double bound = lemma1_bound(inv_m, i);
    worst = std::max(worst, measured / bound);
    if (!(measured <= bound + 1e-9)) ++violations;
  }
  out.passed = violations == 0;
  out.detail = std::to_string(count) + " instances, violations=" + std::to_string(violations) +
               " worst ||P^-1||/bound=" + detail::sci(worst);
  return out;
}

/// Condition number of A against (kappa_F1 + 1) / (1 - G), relative slack 1e-6.
inline CheckResult lemma2_suite(std::uint64_t seed, int count = 50) {
  CheckResult out{"lemma 2 condition-number bound", false, ""};
  int violations = 0;
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    auto rng = instance_rng(seed ^ 0x2222, k);
    const Eigen::Index n = uniform_index(rng, 2, 3);
    const int c = static_cast<int>(uniform_index(rng, 1, 4));
    const QuadraticSystem sys = random_lemma2_system(rng, n, c);
    const SystemParams p = compute_params(sys, c);
    const double bound = lemma2_kappa_bound(p, c);
    const double kappa = estimate_condition_number(assemble(sys, c).matrix_a);
    worst = std::max(worst, kappa / bound);
    if (!(kappa <= bound * (1.0 + 1e-6))) ++violations;
  }
  out.passed = violations == 0;
  out.detail = std::to_string(count) + " systems, violations=" + std::to_string(violations) +
               " worst kappa_A/bound=" + detail::sci(worst);
  return out;
}

/*
 * Truncation error against alpha R^{c+1}/(1-R) for c = 1..6 and the term
 * bounds ||nu_i|| <= gamma_i beta^i alpha^{i+1} <= alpha R^i. The oracle root
 * is seeded at nu_0; the comparison allows 1e-13 absolute for its tolerance.
 */
inline CheckResult lemma3_suite(std::uint64_t seed, int count = 50) {
  CheckResult out{"lemma 3 truncation and term bounds", false, ""};
  constexpr double kSlack = 1e-13;
  int violations = 0;
  int term_violations = 0;
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    auto rng = instance_rng(seed ^ 0x3333, k);
    const Eigen::Index n = uniform_index(rng, 2, 4);
    const QuadraticSystem sys = random_system_with_r(rng, n, uniform(rng, 0.05, 0.7));
    const SystemParams p = compute_params(sys, 6);
    const HomotopySeries full = hpm_solve(sys, 6);
    const NewtonResult oracle = newton_solve(sys, full.nus[0]);
    for (int i = 0; i <= 6; ++i) {
      const double norm = full.nus[i].norm();
      const double chain = static_cast<double>(catalan(i)) * std::pow(p.beta_param, i) * std::pow(p.alpha, i + 1);
      if (!(norm <= chain * (1.0 + 1e-12) + 1e-300) || !(chain <= nu_norm_bound(p, i) * (1.0 + 1e-12)))
        ++term_violations;
    }
    for (int c = 1; c <= 6; ++c) {
      Vector x_tilde = Vector::Zero(n);
      for (int i = 0; i <= c; ++i) x_tilde += full.nus[i];
      const double err = (oracle.x_star - x_tilde).norm();
      const double bound = truncation_error_bound(p, c);
      worst = std::max(worst, err / bound);
      if (!(err <= bound + kSlack)) ++violations;
    }
  }
  out.passed = violations == 0 && term_violations == 0;
  out.detail = std::to_string(count) + " systems x c=1..6, violations=" + std::to_string(violations) +
               " term-bound violations=" + std::to_string(term_violations) + " worst err/bound=" + detail::sci(worst);
  return out;
}

/// Empirical post-selection probability against the lemma-4 lower bound (systems rescaled to R >= ||F0||).
inline CheckResult lemma4_suite(std::uint64_t seed, int count = 50) {
  CheckResult out{"lemma 4 success-probability bound", false, ""};
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k) {
    auto rng = instance_rng(seed ^ 0x4444, k);
    const Eigen::Index n = uniform_index(rng, 2, 4);
    const int c = static_cast<int>(uniform_index(rng, 1, 4));
    const QuadraticSystem raw = random_system_with_r(rng, n, uniform(rng, 0.05, 0.67));
    const QuadraticSystem sys = rescale_system(raw).system;
    const SystemParams p = compute_params(sys, c);
    const EmbeddedSystem emb = assemble(sys, c);
    const Vector y = solve(emb, SolveMethod::direct).solution_y;
    const double prob = empirical_success_probability(y, emb.layout);
    const double eta_prime = extract_block(y, emb.layout, solution_term()).norm() / p.big_r;
    const double bound = lemma4_success_bound(eta_prime, p.big_r);
    worst = std::min(worst, prob / bound);
    if (!(prob >= bound)) ++violations;
  }
  out.passed = violations == 0;
  out.detail = std::to_string(count) + " systems, violations=" + std::to_string(violations) +
               " min p/bound=" + detail::sci(worst);
  return out;
}

/// beta_i = C(c+1, i+1) = sum_{k=i}^c C(k, i) for c <= 10; N = sum n^{i+1}(beta_i + i) for n <= 4, c <= 6.
inline CheckResult structural_counts() {
  CheckResult out{"structural counts", false, ""};
  int violations = 0;
  for (int c = 1; c <= 10; ++c) {
    const EmbeddingLayout layout = enumerate_layout(1, c);
    const auto row = detail::binomial_row(c + 1);
    for (int i = 1; i <= c; ++i) {
      std::uint64_t partial = 0;
      for (int k = i; k <= c; ++k) partial += detail::binomial_row(k)[i];
      if (layout.beta_counts[i] != row[i + 1] || partial != row[i + 1]) ++violations;
    }
    if (layout.beta_counts[0] != 1) ++violations;
  }
  for (Eigen::Index n = 1; n <= 4; ++n) {
    for (int c = 1; c <= 6; ++c) {
      const EmbeddingLayout layout = enumerate_layout(n, c);
      std::uint64_t expected = 0;
      std::uint64_t power = 1;
      for (int i = 0; i <= c; ++i) {
        power *= static_cast<std::uint64_t>(n);
        expected += power * (layout.beta_counts[i] + static_cast<std::uint64_t>(i));
      }
      if (static_cast<std::uint64_t>(layout.total_dim_n) != expected) ++violations;
      Eigen::Index cursor = 0;
      for (std::size_t t = 0; t < layout.size(); ++t) {
        if (layout.offsets[t] != cursor) ++violations;
        cursor += layout.block_dims[t];
      }
      if (cursor != layout.total_dim_n) ++violations;
    }
  }
  out.passed = violations == 0;
  out.detail = "beta for c<=10 and N for n<=4, c<=6; violations=" + std::to_string(violations);
  return out;
}

/*
 * Row sparsity of A against the stated s_A = c(c+1)/2 s. The y0 row holds
 * F1 plus c(c+1)/2 copies of F2, so its count is nnz(F1 row) + c(c+1)/2
 * nnz(F2 row), which can exceed that figure. The detail also reports the
 * count against (1 + c(c+1)/2) s.
 */
inline CheckResult row_sparsity_suite(std::uint64_t seed, int count = 100) {
  CheckResult out{"row sparsity <= c(c+1)/2 s", false, ""};
  int violations = 0;
  int corrected_violations = 0;
  std::string first;
  auto check = [&](const QuadraticSystem& sys, int c, const std::string& label) {
    const EmbeddedSystem emb = assemble(sys, c);
    const Eigen::Index stated = static_cast<Eigen::Index>(c) * (c + 1) / 2 * sys.sparsity();
    const Eigen::Index corrected = (1 + static_cast<Eigen::Index>(c) * (c + 1) / 2) * sys.sparsity();
    if (emb.sparsity_s_a > stated) {
      ++violations;
      if (first.empty())
        first = label + ": measured " + std::to_string(emb.sparsity_s_a) + " > " + std::to_string(stated);
    }
    if (emb.sparsity_s_a > corrected) ++corrected_violations;
  };
  check(appendix_system(), 2, "appendix c=2");
  for (int k = 0; k < count; ++k) {
    auto rng = instance_rng(seed, k);
    const Eigen::Index n = uniform_index(rng, 2, 4);
    const int c = static_cast<int>(uniform_index(rng, 1, 4));
    check(random_system_with_r(rng, n, uniform(rng, 0.05, 0.6)), c, "random #" + std::to_string(k));
  }
  out.passed = violations == 0;
  out.detail = std::to_string(count + 1) + " systems, violations=" + std::to_string(violations) +
               (first.empty() ? "" : " (first: " + first + ")") +
               "; against (1 + c(c+1)/2) s: violations=" + std::to_string(corrected_violations);
  return out;
}

inline std::vector<CheckResult> appendix_checks() {
  return {appendix_golden_solve(), appendix_error(), appendix_success_probability()};
}

inline std::vector<CheckResult> property_suites(std::uint64_t seed) {
  return {embedding_equivalence_suite(seed), lemma1_suite(seed), lemma2_suite(seed),
          lemma3_suite(seed),               lemma4_suite(seed), structural_counts(),
          row_sparsity_suite(seed)};
}

}  // namespace qhpm

#endif  // QHPM_VERIFICATION_HPP_
