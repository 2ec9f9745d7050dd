// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "qhpm/analysis.hpp"
#include "qhpm/format.hpp"
#include "qhpm/verification.hpp"

namespace {

using qhpm::CheckResult;

CheckResult combine(const std::string& name, const std::vector<CheckResult>& parts) {
  CheckResult out{name, true, ""};
  for (const auto& p : parts) {
    out.passed = out.passed && p.passed;
    if (!out.detail.empty()) out.detail += " | ";
    out.detail += p.name + (p.passed ? " ok: " : " FAILED: ") + p.detail;
  }
  return out;
}

// The three formula examples for the complexity estimate.
CheckResult complexity_formulas() {
  CheckResult out{"complexity estimate formulas", true, ""};
  qhpm::ComplexityInputs in;
  in.kappa_f1 = 2.0;
  in.sparsity = 2.0;
  in.n = 2.0;
  in.norm_f1 = 1.0;
  in.norm_f2 = 1.0;
  in.g = 0.5;
  in.big_r = 0.0;
  in.epsilon = 0.01;
  in.eta = 1.0;
  const qhpm::ComplexityEstimate e = qhpm::complexity_estimate(in);
  const double l = std::log2(200.0);
  const double expect = 8.0 * l * l * l;
  const bool query_ok = std::abs(e.query - expect) <= 1e-9 * expect;
  const bool reps_ok = e.repetitions == 3.0;

  qhpm::ComplexityInputs flat = in;
  flat.norm_f2 = 0.0;
  const qhpm::ComplexityEstimate f = qhpm::complexity_estimate(flat);
  const bool unbounded_ok = f.unbounded && std::isinf(f.query);

  out.passed = query_ok && reps_ok && unbounded_ok;
  out.detail = "query=" + qhpm::format_real(e.query) + " (8 log2(200)^3=" + qhpm::format_real(expect) +
               "), repetitions=" + qhpm::format_real(e.repetitions) +
               ", ||F2||=0 unbounded=" + (f.unbounded ? "true" : "false");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 0;
  const std::vector<CheckResult> results{
      combine("1 appendix golden solve", {qhpm::appendix_golden_solve()}),
      combine("2 appendix error", {qhpm::appendix_error()}),
      combine("3 embedding-recursion equivalence", {qhpm::embedding_equivalence_suite(seed)}),
      combine("4 lemma 1 suite", {qhpm::lemma1_suite(seed)}),
      combine("5 lemma 2 suite", {qhpm::lemma2_suite(seed)}),
      combine("6 lemma 3 suite", {qhpm::lemma3_suite(seed)}),
      combine("7 lemma 4 suite", {qhpm::lemma4_suite(seed), qhpm::appendix_success_probability()}),
      combine("8 structural checks", {qhpm::structural_counts(), qhpm::row_sparsity_suite(seed)}),
      combine("9 complexity formulas", {complexity_formulas()}),
  };
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.name << ": " << r.detail << "\n";
    failed += !r.passed;
  }
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
