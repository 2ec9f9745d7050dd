#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qhpm/format.hpp"
#include "qhpm/pipeline.hpp"
#include "qhpm/problem_io.hpp"

namespace qhpm {
namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::invalid_argument;
}

TEST(ParseProblem, ReadsAllFields) {
  const Problem p = parse_problem(R"({"n": 2, "f0": [0.2, -2e-1],
      "f1": [[0, 0, 3], [0, 1, -1], [1, 0, -1], [1, 1, 3]],
      "f2": [[0, 0, -0.5], [0, 1, 0.5], [1, 2, 0.5], [1, 3, -0.5]],
      "epsilon": 1e-4, "order_c": 3, "s": 2})");
  EXPECT_EQ(p.system.n(), 2);
  EXPECT_EQ(p.epsilon, 1e-4);
  EXPECT_EQ(p.order_c, 3);
  const QuadraticSystem ref = appendix_system();
  EXPECT_EQ((p.system.f0() - ref.f0()).norm(), 0.0);
  EXPECT_EQ(DenseMatrix(p.system.f1() - ref.f1()).norm(), 0.0);
  EXPECT_EQ(DenseMatrix(p.system.f2() - ref.f2()).norm(), 0.0);
}

TEST(ParseProblem, RepeatedCoordinatesAreSummed) {
  const Problem p = parse_problem(R"({"n": 1, "f0": [1], "f1": [[0, 0, 1], [0, 0, 2]], "f2": []})");
  EXPECT_EQ(p.system.f1().coeff(0, 0), 3.0);
}

TEST(ParseProblem, Errors) {
  EXPECT_EQ(kind_of("{"), ErrorKind::parse);
  EXPECT_EQ(kind_of("[]"), ErrorKind::parse);
  EXPECT_EQ(kind_of(R"({"f0": [1], "f1": [[0,0,1]], "f2": []})"), ErrorKind::parse);
  EXPECT_EQ(kind_of(R"({"n": 2, "f0": [1], "f1": [], "f2": []})"), ErrorKind::parse);
  EXPECT_EQ(kind_of(R"({"n": 1, "f0": [1], "f1": [[0, 1, 1]], "f2": []})"), ErrorKind::parse);
  EXPECT_EQ(kind_of(R"({"n": 1, "f0": [1], "f1": [[0, 0]], "f2": []})"), ErrorKind::parse);
  EXPECT_EQ(kind_of(R"({"n": 1, "f0": [1], "f1": [[0, 0, 1]]})"), ErrorKind::parse);
  EXPECT_EQ(kind_of(R"({"n": 1, "f0": [1], "f1": [[0, 0, 1]], "f2": [], "order_c": 65})"), ErrorKind::parse);
  EXPECT_EQ(kind_of(R"({"n": 1, "f0": [1], "f1": [[0, 0, 1]], "f2": [], "epsilon": -1})"), ErrorKind::parse);
  EXPECT_EQ(kind_of(R"({"n": 1, "f0": [1], "f1": [], "f2": []})"), ErrorKind::singular_matrix);
  EXPECT_EQ(kind_of(R"({"n": 2, "f0": [1, 1], "f1": [[0, 0, 1], [1, 1, 1], [0, 1, 1]], "f2": [], "s": 1})"),
            ErrorKind::invalid_argument);
  EXPECT_THROW(load_problem("/nonexistent/problem.json"), Error);
}

TEST(WriteProblem, RoundTripsExactly) {
  const QuadraticSystem sys = appendix_system();
  const Problem back = parse_problem(write_problem(sys, 1e-5, 2));
  EXPECT_EQ(back.epsilon, 1e-5);
  EXPECT_EQ(back.order_c, 2);
  EXPECT_EQ((back.system.f0() - sys.f0()).norm(), 0.0);
  EXPECT_EQ(DenseMatrix(back.system.f2() - sys.f2()).norm(), 0.0);
}

TEST(FormatReal, ShortestRoundTrip) {
  for (double v : {0.1, -4.8765625e-2, 1.0 / 3.0, 1e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_real(v)), v);
  EXPECT_EQ(format_real(0.25), "0.25");
}

TEST(Reports, IdenticalRunsGiveIdenticalText) {
  PipelineOptions options;
  options.order_c = 2;
  std::ostringstream a, b;
  write_report(a, run_pipeline(appendix_system(), options));
  write_report(b, run_pipeline(appendix_system(), options));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("x_tilde: [-0.0487656250"), std::string::npos) << a.str();
}

TEST(Pipeline, ChoosesOrderWhenNotGiven) {
  PipelineOptions options;
  options.epsilon = 1e-4;
  options.estimate_condition = false;
  const PipelineResult r = run_pipeline(appendix_system(), options);
  EXPECT_EQ(r.order_source, OrderSource::theorem);
  const double eta = r.oracle->x_star.norm() / r.params.big_r;
  EXPECT_EQ(r.order_c, choose_order(r.params, 1e-4, eta));
  EXPECT_FALSE(r.bounds.kappa_a_empirical.has_value());
  EXPECT_LE(*r.bounds.error_empirical, *r.bounds.error_bound);
}

TEST(Pipeline, BoundsPresentOnlyWhenHypothesesHold) {
  PipelineOptions options;
  options.order_c = 2;
  const PipelineResult r = run_pipeline(appendix_system(), options);
  EXPECT_TRUE(r.bounds.lemma1_bound.has_value());
  EXPECT_FALSE(r.bounds.kappa_a_bound.has_value());
  EXPECT_TRUE(r.bounds.p_lower_bound.has_value());
  EXPECT_TRUE(r.bounds.delta_qlss.has_value());
  EXPECT_GE(r.bounds.p_empirical, *r.bounds.p_lower_bound);
  EXPECT_NEAR(*r.bounds.error_empirical, 1.1061184e-6, 1e-9);
}

}  // namespace
}  // namespace qhpm
