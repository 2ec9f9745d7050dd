// Command-line front end: solve, embed, analyze, verify-appendix, selftest.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qhpm/qhpm.hpp"
#include "qhpm/verification.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kOtherError = 1,
  kParseError = 2,
  kHypothesisFatal = 3,
  kSolverFailure = 4,
  kVerificationFailure = 5,
};

struct RunConfig {
  std::string command;
  std::string problem_path;
  std::optional<int> order_c;
  std::optional<double> epsilon;
  std::string solver = "auto";
  std::string dump_matrix;
  std::string dump_layout;
  std::uint64_t seed = 0;
};

qhpm::SolveMethod parse_method(const std::string& s) {
  if (s == "direct") return qhpm::SolveMethod::direct;
  if (s == "iterative") return qhpm::SolveMethod::iterative;
  return qhpm::SolveMethod::automatic;
}

int exit_code_for(const qhpm::Error& e) {
  switch (e.kind()) {
    case qhpm::ErrorKind::parse:
      return kParseError;
    case qhpm::ErrorKind::divergent_series:
      return kHypothesisFatal;
    case qhpm::ErrorKind::singular_matrix:
    case qhpm::ErrorKind::non_convergence:
    case qhpm::ErrorKind::overflow:
      return kSolverFailure;
    default:
      return kOtherError;
  }
}

void write_file(const std::string& path, const auto& writer) {
  std::ofstream out(path);
  if (!out) throw qhpm::Error(qhpm::ErrorKind::invalid_argument, "cannot write '" + path + "'");
  writer(out);
}

void write_dumps(const RunConfig& cfg, const qhpm::EmbeddedSystem& emb) {
  if (!cfg.dump_matrix.empty()) {
    write_file(cfg.dump_matrix, [&](std::ostream& os) { qhpm::write_matrix_dump(os, emb.matrix_a); });
    write_file(cfg.dump_matrix + ".rhs", [&](std::ostream& os) { qhpm::write_vector_dump(os, emb.vector_b); });
  }
  if (!cfg.dump_layout.empty())
    write_file(cfg.dump_layout, [&](std::ostream& os) { qhpm::write_layout_dump(os, emb.layout); });
}

// Term norms up to c, for runs outside the convergent regime.
void write_divergence_diagnostics(std::ostream& os, const qhpm::QuadraticSystem& sys, int c) {
  os << "[divergence]\n";
  try {
    const qhpm::HomotopySeries series = qhpm::hpm_solve(sys, c);
    for (int i = 0; i <= c; ++i) os << "nu_norm_" << i << ": " << qhpm::format_real(series.nus[i].norm()) << "\n";
  } catch (const qhpm::Error& e) {
    os << "series: " << e.what() << "\n";
  }
}

int print_checks(const std::vector<qhpm::CheckResult>& checks) {
  for (const auto& c : checks) std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  return qhpm::all_passed(checks) ? kOk : kVerificationFailure;
}

int run(const RunConfig& cfg) {
  if (cfg.command == "verify-appendix") {
    const int status = print_checks(qhpm::appendix_checks());
    qhpm::PipelineOptions options;
    options.order_c = 2;
    const qhpm::PipelineResult r = qhpm::run_pipeline(qhpm::appendix_system(), options);
    qhpm::write_report(std::cout, r);
    return status;
  }
  if (cfg.command == "selftest") return print_checks(qhpm::property_suites(cfg.seed));

  const qhpm::Problem problem = qhpm::load_problem(cfg.problem_path);
  const qhpm::QuadraticSystem& sys = problem.system;
  const std::optional<int> order = cfg.order_c ? cfg.order_c : problem.order_c;
  const double epsilon = cfg.epsilon.value_or(problem.epsilon.value_or(1e-3));

  if (cfg.command == "embed") {
    const int c = order.value_or(qhpm::choose_order(qhpm::compute_params(sys, 0), epsilon));
    const qhpm::EmbeddedSystem emb = qhpm::assemble(sys, c);
    write_dumps(cfg, emb);
    std::cout << "order_c: " << c << "\n"
              << "dimension_n: " << emb.layout.total_dim_n << "\n"
              << "nonzeros: " << emb.matrix_a.nonZeros() << "\n"
              << "sparsity_s_a: " << emb.sparsity_s_a << "\n"
              << "beta:";
    for (auto b : emb.layout.beta_counts) std::cout << " " << b;
    std::cout << "\n";
    if (cfg.dump_matrix.empty() && cfg.dump_layout.empty()) qhpm::write_matrix_dump(std::cout, emb.matrix_a);
    return kOk;
  }

  qhpm::PipelineOptions options;
  options.order_c = order;
  options.epsilon = epsilon;
  options.method = parse_method(cfg.solver);
  options.estimate_condition = cfg.command == "analyze";
  const qhpm::PipelineResult r = qhpm::run_pipeline(sys, options);
  write_dumps(cfg, r.embedded);
  if (cfg.command == "solve") {
    qhpm::write_solution(std::cout, r);
  } else {
    qhpm::write_report(std::cout, r);
  }
  if (!r.bounds.hypothesis.r_lt_one) write_divergence_diagnostics(std::cout, sys, r.order_c);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homotopy-perturbation linear embedding for quadratic systems F0 + F1 x + F2 (x (x) x) = 0"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_problem_options = [&](CLI::App* sub) {
    sub->add_option("problem", cfg.problem_path, "Problem file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--order", cfg.order_c, "Truncation order c")->check(CLI::Range(1, 64));
    sub->add_option("--epsilon", cfg.epsilon, "Target accuracy")->check(CLI::PositiveNumber);
    sub->add_option("--dump-matrix", cfg.dump_matrix, "Write A as triplets (b goes to PATH.rhs)");
    sub->add_option("--dump-layout", cfg.dump_layout, "Write the block layout");
  };
  auto* solve = app.add_subcommand("solve", "Solve and print x_tilde, residual, p, and the oracle error");
  add_problem_options(solve);
  solve->add_option("--solver", cfg.solver, "Linear solver")->check(CLI::IsMember({"direct", "iterative", "auto"}));
  auto* embed = app.add_subcommand("embed", "Build the embedded linear system and dump it");
  add_problem_options(embed);
  auto* analyze = app.add_subcommand("analyze", "Full bounds report");
  add_problem_options(analyze);
  analyze->add_option("--solver", cfg.solver, "Linear solver")->check(CLI::IsMember({"direct", "iterative", "auto"}));
  app.add_subcommand("verify-appendix", "Check the built-in two-variable example against its published values");
  auto* selftest = app.add_subcommand("selftest", "Run the randomized property suites");
  selftest->add_option("--seed", cfg.seed, "Base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParseError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    return run(cfg);
  } catch (const qhpm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOtherError;
  }
}
