#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qhpm/homotopy.hpp"
#include "qhpm/newton.hpp"
#include "qhpm/problem_io.hpp"
#include "qhpm/random_systems.hpp"

namespace qhpm {
namespace {

SystemParams params_with(double alpha, double r) {
  SystemParams p;
  p.alpha = alpha;
  p.big_r = r;
  return p;
}

TEST(HpmSolve, WorkedExampleTermsMatchHandRecursion) {
  const HomotopySeries s = hpm_solve(appendix_system(), 2);
  ASSERT_EQ(s.nus.size(), 3u);
  EXPECT_NEAR(s.nus[0][0], -0.05, 1e-16);
  EXPECT_NEAR(s.nus[0][1], 0.05, 1e-16);
  EXPECT_NEAR(s.nus[1][0], 0.00125, 1e-17);
  EXPECT_NEAR(s.nus[1][1], 0.00125, 1e-17);
  EXPECT_NEAR(s.nus[2][0], -1.5625e-5, 1e-19);
  EXPECT_NEAR(s.nus[2][1], 1.5625e-5, 1e-19);
  EXPECT_NEAR(s.x_tilde[0], -4.8765625e-2, 1e-16);
  EXPECT_NEAR(s.x_tilde[1], 5.1265625e-2, 1e-16);
}

TEST(HpmSolve, LinearSystemTerminatesAfterFirstTerm) {
  auto rng = instance_rng(3, 0);
  const QuadraticSystem base = random_system_with_r(rng, 4, 0.3);
  const QuadraticSystem sys(base.f0(), base.f1(), SparseMatrix(4, 16));
  const HomotopySeries s = hpm_solve(sys, 3);
  const Vector expect = DenseMatrix(sys.f1()).fullPivLu().solve(-sys.f0());
  EXPECT_LE((s.nus[0] - expect).norm(), 1e-14);
  for (int i = 1; i <= 3; ++i) EXPECT_EQ(s.nus[i].norm(), 0.0);
}

TEST(HpmSolve, RecursionResidualsAndSumInvariant) {
  for (int k = 0; k < 20; ++k) {
    auto rng = instance_rng(5, k);
    const Eigen::Index n = uniform_index(rng, 2, 5);
    const QuadraticSystem sys = random_system_with_r(rng, n, uniform(rng, 0.1, 0.9), 3);
    const HomotopySeries s = hpm_solve(sys, 6);
    // Independent dense F2 and explicit Kronecker products.
    const DenseMatrix f1 = sys.f1();
    const DenseMatrix f2 = sys.f2();
    EXPECT_LE((f1 * s.nus[0] + sys.f0()).norm(), 1e-10 * sys.f0().norm());
    Vector sum = s.nus[0];
    for (int i = 1; i <= 6; ++i) {
      Vector conv = Vector::Zero(n * n);
      for (int j = 0; j < i; ++j) conv += kron(s.nus[j], s.nus[i - 1 - j]);
      const Vector rhs = f2 * conv;
      EXPECT_LE((f1 * s.nus[i] + rhs).norm(), 1e-10 * std::max(rhs.norm(), 1e-300));
      sum += s.nus[i];
    }
    EXPECT_LE((sum - s.x_tilde).norm(), 1e-15 * sum.norm() + 1e-300);
  }
}

TEST(HpmSolve, DivergentSeriesOverflows) {
  SparseMatrix f1(1, 1);
  f1.insert(0, 0) = 1.0;
  SparseMatrix f2(1, 1);
  f2.insert(0, 0) = 10.0;
  const QuadraticSystem sys(Vector::Constant(1, 10.0), f1, f2);
  try {
    hpm_solve(sys, 64);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::overflow);
  }
}

TEST(ChooseOrder, FormulaExamples) {
  EXPECT_EQ(choose_order(params_with(0.5, 0.5), 1e-3), 10);
  EXPECT_EQ(choose_order(params_with(0.5, 1e-12), 0.1), 1);
  EXPECT_EQ(choose_order(params_with(0.5, 0.0), 0.1), 1);
  EXPECT_EQ(choose_order(params_with(0.1414214, 0.2), 1e-6), 8);
}

TEST(ChooseOrder, EtaModeAndErrors) {
  // log_2(4 * 0.5 / (1 * 0.5 * 1e-3 * 0.5)) = log_2(8000) = 12.97
  EXPECT_EQ(choose_order(params_with(0.5, 0.5), 1e-3, 1.0), 13);
  EXPECT_EQ(choose_order(params_with(0.5, 0.999999), 1e-12), kMaxOrder);
  try {
    choose_order(params_with(0.5, 1.0), 1e-3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::divergent_series);
  }
}

TEST(Catalan, ExamplesRecurrenceAndClosedForm) {
  EXPECT_EQ(catalan(0), 1u);
  EXPECT_EQ(catalan(3), 5u);
  EXPECT_EQ(catalan(5), 42u);
  std::vector<std::uint64_t> g{1};
  for (int i = 1; i <= 15; ++i) {
    std::uint64_t v = 0;
    for (int j = 0; j < i; ++j) v += g[j] * g[i - 1 - j];
    g.push_back(v);
    EXPECT_EQ(catalan(i), v) << "i=" << i;
  }
  EXPECT_EQ(catalan(30), 3814986502092304u);
  EXPECT_THROW(catalan(31), Error);
}

TEST(NuNormBound, Examples) {
  const SystemParams p = params_with(0.1414214, 0.2);
  EXPECT_NEAR(nu_norm_bound(p, 0), 0.1414214, 1e-15);
  EXPECT_NEAR(nu_norm_bound(p, 2), 5.656856e-3, 1e-9);
  EXPECT_EQ(nu_norm_bound(params_with(0.3, 0.0), 1), 0.0);
}

TEST(TruncationErrorBound, Examples) {
  EXPECT_NEAR(truncation_error_bound(params_with(0.1414214, 0.2), 2), 1.414214e-3, 1e-9);
  EXPECT_EQ(truncation_error_bound(params_with(0.7, 0.0), 3), 0.0);
  // 1 * 0.5^1 / (1 - 0.5) = 1.
  EXPECT_DOUBLE_EQ(truncation_error_bound(params_with(1.0, 0.5), 0), 1.0);
  EXPECT_THROW(truncation_error_bound(params_with(1.0, 1.0), 2), Error);
}

TEST(HpmSolve, SeriesAndTruncationBoundsHoldOnRandomSystems) {
  for (int k = 0; k < 30; ++k) {
    auto rng = instance_rng(13, k);
    const QuadraticSystem sys = random_system_with_r(rng, uniform_index(rng, 2, 4), uniform(rng, 0.05, 0.69));
    const SystemParams p = compute_params(sys, 0);
    const HomotopySeries s = hpm_solve(sys, 8);
    for (int i = 0; i <= 8; ++i) {
      const double chain = static_cast<double>(catalan(i)) * std::pow(p.beta_param, i) * std::pow(p.alpha, i + 1);
      EXPECT_LE(s.nus[i].norm(), chain * (1 + 1e-12));
      EXPECT_LE(chain, nu_norm_bound(p, i) * (1 + 1e-12));
    }
    const NewtonResult root = newton_solve(sys, s.nus[0]);
    for (int c = 1; c <= 8; ++c) {
      const HomotopySeries sc = hpm_solve(sys, c);
      EXPECT_LE((root.x_star - sc.x_tilde).norm(), truncation_error_bound(p, c) + 1e-13);
    }
  }
}

TEST(HpmSolve, EquationResidualIsBoundedByCrossTerms) {
  for (int k = 0; k < 20; ++k) {
    auto rng = instance_rng(17, k);
    const QuadraticSystem sys = random_system_with_r(rng, 3, uniform(rng, 0.1, 0.8));
    const SystemParams p = compute_params(sys, 0);
    const int c = 3;
    const HomotopySeries s = hpm_solve(sys, c);
    double cross = 0.0;
    for (int i = 0; i <= c; ++i)
      for (int j = 0; j <= c; ++j)
        if (i + j > c - 1) cross += s.nus[i].norm() * s.nus[j].norm();
    // Order-k terms of G(x_tilde) cancel for k <= c; the products nu_i nu_j with i + j >= c remain.
    EXPECT_LE(sys.residual_norm(s.x_tilde), p.norm_f2 * cross * (1 + 1e-10) + 1e-14);
  }
}

}  // namespace
}  // namespace qhpm
