#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "qhpm/problem_io.hpp"
#include "qhpm/quadratic_system.hpp"
#include "qhpm/random_systems.hpp"

namespace qhpm {
namespace {

SparseMatrix identity(Eigen::Index n, double scale = 1.0) {
  SparseMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m.insert(i, i) = scale;
  return m;
}

TEST(QuadraticSystem, RejectsBadShapesAndValues) {
  Vector f0 = Vector::Ones(2);
  EXPECT_THROW(QuadraticSystem(f0, identity(3), SparseMatrix(2, 4)), Error);
  EXPECT_THROW(QuadraticSystem(f0, identity(2), SparseMatrix(2, 3)), Error);
  Vector bad = f0;
  bad[1] = std::numeric_limits<double>::quiet_NaN();
  try {
    QuadraticSystem(bad, identity(2), SparseMatrix(2, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_finite);
  }
}

TEST(QuadraticSystem, SingularLinearPartIsRejected) {
  SparseMatrix f1(2, 2);
  f1.insert(0, 0) = 1.0;
  f1.insert(0, 1) = 2.0;
  f1.insert(1, 0) = 2.0;
  f1.insert(1, 1) = 4.0;
  try {
    QuadraticSystem(Vector::Ones(2), f1, SparseMatrix(2, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular_matrix);
  }
}

TEST(QuadraticSystem, SparsityIsMeasuredAndDeclaredValueChecked) {
  const QuadraticSystem sys = appendix_system();
  EXPECT_EQ(sys.sparsity(), 2);
  EXPECT_THROW(QuadraticSystem(sys.f0(), sys.f1(), sys.f2(), 1.0, Eigen::Index{1}), Error);
  EXPECT_NO_THROW(QuadraticSystem(sys.f0(), sys.f1(), sys.f2(), 1.0, Eigen::Index{3}));
}

TEST(ComputeParams, WorkedExampleNormsMatchEigendecomposition) {
  const QuadraticSystem sys = appendix_system();
  // Oracle: F1 is symmetric, so its singular values are |eigenvalues|.
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig{DenseMatrix(sys.f1())};
  const double lo = eig.eigenvalues().cwiseAbs().minCoeff();
  const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
  EXPECT_NEAR(lo, 2.0, 1e-14);
  EXPECT_NEAR(hi, 4.0, 1e-14);

  const SystemParams p = compute_params(sys, 2);
  EXPECT_NEAR(p.inv_norm_f1, 1.0 / lo, 1e-12);
  EXPECT_NEAR(p.norm_f1, hi, 1e-12);
  EXPECT_NEAR(p.kappa_f1, 2.0, 1e-12);
  // ||F0|| = 0.2 sqrt(2); F2 F2^T = 0.5 I, so ||F2|| = sqrt(0.5).
  EXPECT_NEAR(p.norm_f0, 0.2 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(p.norm_f2, std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(p.alpha, 0.1414214, 1e-7);
  EXPECT_NEAR(p.beta_param, 0.3535534, 1e-7);
  EXPECT_NEAR(p.big_r, 0.2, 1e-14);
  EXPECT_DOUBLE_EQ(p.big_r, 4.0 * p.alpha * p.beta_param);
  EXPECT_NEAR(p.g_factor, 0.5 * (1.0 + 3.0 * std::sqrt(0.5)), 1e-12);
  EXPECT_EQ(p.zeta_rescale, 1.0);
}

TEST(ComputeParams, LinearSystemHasZeroR) {
  const QuadraticSystem sys(Vector::Constant(3, 0.7), identity(3), SparseMatrix(3, 9));
  const SystemParams p = compute_params(sys, 4);
  EXPECT_EQ(p.beta_param, 0.0);
  EXPECT_EQ(p.big_r, 0.0);
  EXPECT_NEAR(p.kappa_f1, 1.0, 1e-15);
}

TEST(ComputeParams, PowerIterationAgreesWithDenseSvd) {
  for (int k = 0; k < 20; ++k) {
    auto rng = instance_rng(7, k);
    const Eigen::Index n = uniform_index(rng, 2, 6);
    const QuadraticSystem sys = random_system_with_r(rng, n, uniform(rng, 0.1, 0.8), 3);
    const SystemParams dense = compute_params(sys, 2, NormMethod::dense);
    const SystemParams power = compute_params(sys, 2, NormMethod::power);
    EXPECT_NEAR(power.norm_f1 / dense.norm_f1, 1.0, 1e-8);
    EXPECT_NEAR(power.norm_f2 / dense.norm_f2, 1.0, 1e-8);
    EXPECT_NEAR(power.inv_norm_f1 / dense.inv_norm_f1, 1.0, 1e-8);
    EXPECT_GE(dense.kappa_f1, 1.0);
    EXPECT_GE(dense.inv_norm_f1 * dense.norm_f1, 1.0 - 1e-15);
  }
}

TEST(CheckHypotheses, WorkedExampleFlags) {
  const SystemParams p = compute_params(appendix_system(), 2);
  const HypothesisReport h = check_hypotheses(p, 2, 1e-3);
  EXPECT_TRUE(h.r_lt_one);
  EXPECT_TRUE(h.r_lt_sqrt2_over_2);
  EXPECT_TRUE(h.inv_norm_lt_one);
  EXPECT_FALSE(h.g_lt_one);
  // R = 0.2 < ||F0|| = 0.283: the example is used as published, without rescaling.
  EXPECT_FALSE(h.r_geq_norm_f0);
  // (0.5 / 0.5) * 3 * sqrt(0.5) = 2.12
  EXPECT_NEAR(lemma2_zeta(p, 2), 3.0 * std::sqrt(0.5), 1e-12);
  EXPECT_FALSE(h.lemma2_zeta_lt_one);
  EXPECT_EQ(h, check_hypotheses(p, 2, 1e-3));
}

TEST(CheckHypotheses, ScaledIdentityLinearSystemSatisfiesAll) {
  const QuadraticSystem sys(Vector::Constant(2, 1e-3), identity(2, 2.0), SparseMatrix(2, 4));
  for (int c : {1, 5, 30}) {
    const SystemParams p = compute_params(sys, c);
    EXPECT_NEAR(g_factor(p, c), 0.5, 1e-15);
    const HypothesisReport h = check_hypotheses(p, c, 1e-2);
    EXPECT_TRUE(h.r_lt_one && h.r_lt_sqrt2_over_2 && h.inv_norm_lt_one && h.g_lt_one && h.lemma2_zeta_lt_one);
    EXPECT_TRUE(h.theorem_holds());
  }
}

// F1 = I, ||F0|| = 1, ||F2|| = 0.125 gives R = 0.5.
QuadraticSystem half_radius_system() {
  Vector f0(2);
  f0 << 0.6, 0.8;
  SparseMatrix f2(2, 4);
  f2.insert(0, 0) = 0.125;
  f2.insert(1, 3) = 0.125;
  return QuadraticSystem(f0, identity(2), f2);
}

TEST(RescaleSystem, ShrinksConstantTermToR) {
  const QuadraticSystem sys = half_radius_system();
  ASSERT_NEAR(compute_params(sys, 0).big_r, 0.5, 1e-15);
  const RescaledSystem out = rescale_system(sys);
  EXPECT_NEAR(out.factor, 0.5, 1e-15);
  const SystemParams p = compute_params(out.system, 0);
  EXPECT_NEAR(p.norm_f0, 0.5, 1e-15);
  EXPECT_NEAR(p.big_r, 0.5, 1e-15);
  EXPECT_NEAR(p.zeta_rescale, 0.5, 1e-15);
}

TEST(RescaleSystem, IdentityWhenAlreadySatisfiedOrZero) {
  Vector f0 = Vector::Constant(2, 0.01);
  SparseMatrix f2(2, 4);
  f2.insert(0, 0) = 2.0;
  const QuadraticSystem ok(f0, identity(2), f2);
  ASSERT_GE(compute_params(ok, 0).big_r, f0.norm());
  EXPECT_EQ(rescale_system(ok).factor, 1.0);

  const QuadraticSystem zero(Vector::Zero(2), identity(2), f2);
  EXPECT_EQ(rescale_system(zero).factor, 1.0);
}

TEST(RescaleSystem, InfeasibleWhenQuadraticTermVanishes) {
  const QuadraticSystem sys(Vector::Ones(2), identity(2), SparseMatrix(2, 4));
  try {
    rescale_system(sys);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::infeasible_rescale);
  }
}

TEST(RescaleSystem, RIsInvariantUnderAnySubstitution) {
  for (int k = 0; k < 25; ++k) {
    auto rng = instance_rng(11, k);
    const QuadraticSystem sys = random_system_with_r(rng, uniform_index(rng, 2, 4), uniform(rng, 0.05, 0.9));
    const double zeta = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
    const QuadraticSystem scaled(zeta * sys.f0(), sys.f1(), sys.f2() / zeta);
    EXPECT_NEAR(compute_params(scaled, 0).big_r / compute_params(sys, 0).big_r, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace qhpm
