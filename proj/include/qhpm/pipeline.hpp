#ifndef QHPM_PIPELINE_HPP_
#define QHPM_PIPELINE_HPP_

#include <optional>
#include <ostream>
#include <string>

#include "qhpm/analysis.hpp"
#include "qhpm/embedding.hpp"
#include "qhpm/format.hpp"
#include "qhpm/homotopy.hpp"
#include "qhpm/linear_solver.hpp"
#include "qhpm/newton.hpp"
#include "qhpm/quadratic_system.hpp"

namespace qhpm {

struct BoundsReport {
  std::optional<double> lemma1_bound;
  std::optional<double> kappa_a_bound;
  std::optional<double> kappa_a_empirical;
  std::optional<double> error_bound;
  std::optional<double> error_empirical;
  std::optional<double> p_lower_bound;
  double p_empirical = 0.0;
  double eta = 0.0;
  bool eta_from_oracle = false;
  double eta_prime = 0.0;
  std::optional<double> delta_qlss;
  ComplexityEstimate complexity;
  HypothesisReport hypothesis;
};

struct PipelineOptions {
  std::optional<int> order_c;
  double epsilon = 1e-3;
  SolveMethod method = SolveMethod::automatic;
  double solver_tol = 1e-12;
  bool estimate_condition = true;
};

enum class OrderSource { user, theorem, truncation };

inline const char* to_string(OrderSource s) {
  switch (s) {
    case OrderSource::user: return "user";
    case OrderSource::theorem: return "theorem";
    case OrderSource::truncation: return "truncation";
  }
  return "?";
}

struct PipelineResult {
  int order_c = 0;
  OrderSource order_source = OrderSource::user;
  double epsilon = 0.0;
  SystemParams params;
  EmbeddedSystem embedded;
  SolveOutcome outcome;
  Vector x_tilde;
  double equation_residual = 0.0;
  std::optional<NewtonResult> oracle;
  std::string oracle_failure;
  BoundsReport bounds;
};

/*
 * params -> order -> embedding -> solve -> extraction -> analysis.
 *
 * The Newton oracle is seeded at nu_0 = -F1^-1 F0. Without a user order the
 * order comes from the theorem rule when the oracle converges (eta needs
 * ||x*||) and from the truncation rule otherwise.
 */
inline PipelineResult run_pipeline(const QuadraticSystem& sys, const PipelineOptions& options) {
  PipelineResult out;
  out.epsilon = options.epsilon;
  const SystemParams base = compute_params(sys, 0);
  const Vector nu0 = sys.f1_factorization().solve(-sys.f0());
  try {
    out.oracle = newton_solve(sys, nu0);
  } catch (const Error& e) {
    out.oracle_failure = e.what();
  }

  if (options.order_c) {
    out.order_c = *options.order_c;
    out.order_source = OrderSource::user;
  } else if (out.oracle && base.big_r > 0.0 && out.oracle->x_star.norm() > 0.0) {
    out.order_c = choose_order(base, options.epsilon, out.oracle->x_star.norm() / base.big_r);
    out.order_source = OrderSource::theorem;
  } else {
    out.order_c = choose_order(base, options.epsilon);
    out.order_source = OrderSource::truncation;
  }

  const int c = out.order_c;
  out.params = base;
  out.params.order_c = c;
  out.params.g_factor = g_factor(base, c);
  const SystemParams& p = out.params;

  out.embedded = assemble(sys, c);
  out.outcome = solve(out.embedded, options.method, options.solver_tol);
  out.x_tilde = extract_block(out.outcome.solution_y, out.embedded.layout, solution_term());
  out.equation_residual = sys.residual_norm(out.x_tilde);

  BoundsReport& b = out.bounds;
  b.hypothesis = check_hypotheses(p, c, options.epsilon);
  if (b.hypothesis.inv_norm_lt_one && p.inv_norm_f1 > 0.0) b.lemma1_bound = lemma1_bound(p.inv_norm_f1, c);
  if (b.hypothesis.lemma2_holds()) b.kappa_a_bound = lemma2_kappa_bound(p, c);
  if (options.estimate_condition) b.kappa_a_empirical = estimate_condition_number(out.embedded.matrix_a);
  if (b.hypothesis.r_lt_one) b.error_bound = truncation_error_bound(p, c);
  if (out.oracle) b.error_empirical = (out.oracle->x_star - out.x_tilde).norm();
  b.p_empirical = empirical_success_probability(out.outcome.solution_y, out.embedded.layout);

  const double inf = std::numeric_limits<double>::infinity();
  b.eta_prime = p.big_r > 0.0 ? out.x_tilde.norm() / p.big_r : inf;
  b.eta_from_oracle = out.oracle.has_value();
  b.eta = out.oracle ? (p.big_r > 0.0 ? out.oracle->x_star.norm() / p.big_r : inf) : b.eta_prime;
  if (b.hypothesis.lemma4_holds()) b.p_lower_bound = lemma4_success_bound(b.eta_prime, p.big_r);
  if (b.hypothesis.r_lt_sqrt2_over_2) b.delta_qlss = qlss_delta(b.eta_prime, p.big_r, options.epsilon);
  b.complexity = complexity_estimate(p, sys, c, options.epsilon, b.eta);
  return out;
}

namespace detail {

inline std::string optional_real(const std::optional<double>& v, const char* missing) {
  return v ? format_real(*v) : std::string(missing);
}

inline const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace detail

inline void write_params(std::ostream& os, const SystemParams& p) {
  os << "alpha: " << format_real(p.alpha) << "\n"
     << "beta: " << format_real(p.beta_param) << "\n"
     << "R: " << format_real(p.big_r) << "\n"
     << "norm_f0: " << format_real(p.norm_f0) << "\n"
     << "norm_f1: " << format_real(p.norm_f1) << "\n"
     << "norm_f2: " << format_real(p.norm_f2) << "\n"
     << "inv_norm_f1: " << format_real(p.inv_norm_f1) << "\n"
     << "kappa_f1: " << format_real(p.kappa_f1) << "\n"
     << "G: " << format_real(p.g_factor) << "\n"
     << "zeta_rescale: " << format_real(p.zeta_rescale) << "\n";
}

inline void write_hypotheses(std::ostream& os, const HypothesisReport& h) {
  os << "[hypotheses]\n"
     << "r_lt_one: " << detail::yes_no(h.r_lt_one) << "\n"
     << "r_lt_sqrt2_over_2: " << detail::yes_no(h.r_lt_sqrt2_over_2) << "\n"
     << "inv_norm_lt_one: " << detail::yes_no(h.inv_norm_lt_one) << "\n"
     << "g_lt_one: " << detail::yes_no(h.g_lt_one) << "\n"
     << "r_geq_norm_f0: " << detail::yes_no(h.r_geq_norm_f0) << "\n"
     << "lemma2_zeta_lt_one: " << detail::yes_no(h.lemma2_zeta_lt_one) << "\n"
     << "epsilon_lt_tenth: " << detail::yes_no(h.epsilon_lt_tenth) << "\n";
}

inline void write_bounds(std::ostream& os, const BoundsReport& b) {
  os << "[bounds]\n"
     << "lemma1_bound: " << detail::optional_real(b.lemma1_bound, "n/a (||F1^-1|| >= 1)") << "\n"
     << "kappa_a_bound: " << detail::optional_real(b.kappa_a_bound, "n/a (lemma 2 hypotheses fail)") << "\n"
     << "kappa_a_empirical: " << detail::optional_real(b.kappa_a_empirical, "not computed") << "\n"
     << "error_bound: " << detail::optional_real(b.error_bound, "n/a (R >= 1)") << "\n"
     << "error_empirical: " << detail::optional_real(b.error_empirical, "n/a (oracle failed)") << "\n"
     << "p_lower_bound: " << detail::optional_real(b.p_lower_bound, "n/a (lemma 4 hypotheses fail)") << "\n"
     << "p_empirical: " << format_real(b.p_empirical) << "\n"
     << "eta: " << format_real(b.eta) << "\n"
     << "eta_source: " << (b.eta_from_oracle ? "oracle" : "fallback eta_prime") << "\n"
     << "eta_prime: " << format_real(b.eta_prime) << "\n"
     << "delta_qlss: " << detail::optional_real(b.delta_qlss, "n/a (R >= sqrt(2)/2)") << "\n"
     << "[complexity]\n"
     << "query_complexity_estimate: " << format_real(b.complexity.query) << "\n"
     << "gate_factor_estimate: " << format_real(b.complexity.gate_factor) << "\n"
     << "repetitions_estimate: " << format_real(b.complexity.repetitions) << "\n"
     << "unbounded: " << detail::yes_no(b.complexity.unbounded) << "\n"
     << "epsilon_out_of_range: " << detail::yes_no(b.complexity.epsilon_out_of_range) << "\n"
     << "polylog_exponent: " << b.complexity.polylog_exponent << " (fixed reporting choice, unit constants)\n";
  write_hypotheses(os, b.hypothesis);
}

inline void write_solution(std::ostream& os, const PipelineResult& r) {
  os << "order_c: " << r.order_c << "\n"
     << "order_source: " << to_string(r.order_source) << "\n"
     << "epsilon: " << format_real(r.epsilon) << "\n"
     << "dimension_n: " << r.embedded.layout.total_dim_n << "\n"
     << "nonzeros: " << r.embedded.matrix_a.nonZeros() << "\n"
     << "sparsity_s_a: " << r.embedded.sparsity_s_a << "\n"
     << "solver: " << to_string(r.outcome.method) << "\n"
     << "solver_iterations: " << r.outcome.iterations << "\n"
     << "solver_residual_rel: " << format_real(r.outcome.residual_rel) << "\n"
     << "x_tilde: " << format_vector(r.x_tilde) << "\n"
     << "equation_residual: " << format_real(r.equation_residual) << "\n"
     << "p_empirical: " << format_real(r.bounds.p_empirical) << "\n";
  if (r.oracle) {
    os << "x_star: " << format_vector(r.oracle->x_star) << "\n"
       << "oracle_residual: " << format_real(r.oracle->residual) << "\n"
       << "error_empirical: " << format_real(*r.bounds.error_empirical) << "\n";
  } else {
    os << "x_star: n/a (" << r.oracle_failure << ")\n";
  }
}

inline void write_report(std::ostream& os, const PipelineResult& r) {
  os << "[solution]\n";
  write_solution(os, r);
  os << "[params]\n";
  write_params(os, r.params);
  write_bounds(os, r.bounds);
}

/// Header "N nnz", then "row col value" sorted row-major.
inline void write_matrix_dump(std::ostream& os, const SparseMatrix& a) {
  Eigen::SparseMatrix<double, Eigen::RowMajor> rm = a;
  rm.makeCompressed();
  os << rm.rows() << " " << rm.nonZeros() << "\n";
  for (Eigen::Index r = 0; r < rm.outerSize(); ++r)
    for (decltype(rm)::InnerIterator it(rm, r); it; ++it)
      os << it.row() << " " << it.col() << " " << format_real(it.value()) << "\n";
}

/// Header "N nnz", then "index value" for the nonzero entries.
inline void write_vector_dump(std::ostream& os, const Vector& b) {
  Eigen::Index nnz = 0;
  for (Eigen::Index i = 0; i < b.size(); ++i) nnz += b[i] != 0.0;
  os << b.size() << " " << nnz << "\n";
  for (Eigen::Index i = 0; i < b.size(); ++i)
    if (b[i] != 0.0) os << i << " " << format_real(b[i]) << "\n";
}

/// One line per term: "level slot split_r offset dim tuple...", split_r = -1 outside split groups.
inline void write_layout_dump(std::ostream& os, const EmbeddingLayout& layout) {
  for (std::size_t pos = 0; pos < layout.size(); ++pos) {
    const TermIndex& t = layout.terms[pos];
    os << t.level << " " << t.slot << " " << t.split_r.value_or(-1) << " " << layout.offsets[pos] << " "
       << layout.block_dims[pos];
    for (int a : t.tuple) os << " " << a;
    os << "\n";
  }
}

}  // namespace qhpm

#endif  // QHPM_PIPELINE_HPP_
