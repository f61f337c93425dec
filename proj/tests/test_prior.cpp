#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pansharp/errors.hpp"
#include "pansharp/prior.hpp"
#include "test_support.hpp"

using namespace pansharp;
using pansharp::oracle::random_matrix;

namespace {

Matrix column(std::initializer_list<double> v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

}  // namespace

TEST(PriorInverse, EqualWeightsGiveOnes) {
  const PriorInverse p = solve_prior_inverse(Matrix::Constant(4, 1, 0.25));
  ASSERT_TRUE(p.feasible);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(p.m(i), 1.0, 1e-14);
  EXPECT_NEAR(p.inverse_ability, 1.0, 1e-14);
}

TEST(PriorInverse, SingleActiveCoordinate) {
  const PriorInverse p = solve_prior_inverse(column({1, 0, 0, 0}));
  ASSERT_TRUE(p.feasible);
  EXPECT_DOUBLE_EQ(p.m(0), 1.0);
  for (int i = 1; i < 4; ++i) EXPECT_DOUBLE_EQ(p.m(i), 1.15);
}

TEST(PriorInverse, InfeasibleBoxReported) {
  const PriorInverse p = solve_prior_inverse(column({2, 2}));
  EXPECT_FALSE(p.feasible);
  // Equality-only projection of 1.15·1.
  EXPECT_NEAR(p.m(0), 0.25, 1e-14);
  EXPECT_NEAR(p.m(1), 0.25, 1e-14);
  EXPECT_NEAR(p.inverse_ability, 1.0, 1e-14);
}

TEST(PriorInverse, ZeroResponseIsError) {
  EXPECT_THROW(solve_prior_inverse(Matrix::Zero(3, 1)), DegenerateError);
  EXPECT_THROW(solve_prior_inverse(Matrix::Ones(3, 2)), ShapeError);
  EXPECT_THROW(solve_prior_inverse(Matrix::Ones(3, 1), PriorBox{1.4, 0.9}),
               InvalidArgument);
}

TEST(PriorInverse, ClippedCoordinatesHitBoundsExactly) {
  // The dominant entry would land at 0.886 without the lower bound.
  const PriorInverse p = solve_prior_inverse(column({1.0, 0.05, 0.05}));
  ASSERT_TRUE(p.feasible);
  int at_bound = 0;
  for (int i = 0; i < 3; ++i) {
    EXPECT_GE(p.m(i), 0.9);
    EXPECT_LE(p.m(i), 1.4);
    at_bound += (p.m(i) == 0.9 || p.m(i) == 1.4);
  }
  EXPECT_GT(at_bound, 0);
  EXPECT_NEAR(p.inverse_ability, 1.0, 1e-10);
}

TEST(PriorInverse, IsClosestFeasiblePointProperty) {
  // Compare against random feasible points: none is closer to the center.
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = random_matrix(3, 1, rng, 0.05, 0.6);
    const PriorInverse p = solve_prior_inverse(a);
    if (!p.feasible) continue;
    const double best = (p.m.array() - 1.15).matrix().norm();
    for (int k = 0; k < 200; ++k) {
      // Random point on the hyperplane inside the box: pick two coords,
      // solve the third.
      RowVector m(3);
      m(0) = 0.9 + 0.5 * unit(rng);
      m(1) = 0.9 + 0.5 * unit(rng);
      m(2) = (1.0 - m(0) * a(0) - m(1) * a(1)) / a(2);
      if (m(2) < 0.9 || m(2) > 1.4) continue;
      EXPECT_GE((m.array() - 1.15).matrix().norm(), best - 1e-12);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(PriorInverse, ScaledResponseSatisfiesConstraint) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_matrix(5, 1, rng, 0.1, 1.0);
    for (double lambda : {0.1, 0.5, 2.0}) {
      const PriorInverse p = solve_prior_inverse(lambda * a);
      EXPECT_NEAR((p.m * (lambda * a))(0, 0), 1.0, 1e-10);
    }
  }
}

TEST(PriorInverse, SamplerStaysFeasibleAndIsSeeded) {
  const Matrix a = Matrix::Constant(6, 1, 1.0 / 6);
  const PriorInverse s1 = sample_prior_inverse(a, {}, 17);
  const PriorInverse s2 = sample_prior_inverse(a, {}, 17);
  const PriorInverse s3 = sample_prior_inverse(a, {}, 18);
  EXPECT_EQ(s1.m, s2.m);
  EXPECT_NE(s1.m, s3.m);
  EXPECT_TRUE(s1.feasible);
  EXPECT_GE(s1.m.minCoeff(), 0.9);
  EXPECT_LE(s1.m.maxCoeff(), 1.4);
  EXPECT_NEAR(s1.inverse_ability, 1.0, 1e-8);
}

TEST(GsaWeights, IdenticalColumnsGiveUniformWeights) {
  std::mt19937_64 rng(4);
  const Matrix col = random_matrix(20, 1, rng);
  const Matrix z = col.replicate(1, 3);
  const Matrix a = column({0.2, 0.5, 0.3});
  const RowVector w = gsa_weights(z, a);
  EXPECT_NEAR(w(0), w(1), 1e-12);
  EXPECT_NEAR(w(1), w(2), 1e-12);
  EXPECT_NEAR((w * a)(0, 0), 1.0, 1e-12);
}

TEST(GsaWeights, HandComputedTwoPixelCase) {
  Matrix z(2, 2);
  z << 0, 0, 1, 2;
  const RowVector w = gsa_weights(z, column({1, 1}));
  EXPECT_NEAR(w(0), 1.0 / 3, 1e-15);
  EXPECT_NEAR(w(1), 2.0 / 3, 1e-15);
}

TEST(GsaWeights, UnitInverseAbilityProperty) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index s = 1 + rng() % 10;
    const Matrix z = random_matrix(30, s, rng, 0, 500);
    const Matrix a = random_matrix(s, 1, rng);
    EXPECT_NEAR((gsa_weights(z, a) * a)(0, 0), 1.0, 1e-10);
  }
}

TEST(GsaWeights, ShiftInvariant) {
  std::mt19937_64 rng(6);
  const Matrix z = random_matrix(25, 4, rng, 0, 10);
  const Matrix a = random_matrix(4, 1, rng, 0.1, 1);
  const RowVector w0 = gsa_weights(z, a);
  const RowVector w1 = gsa_weights(z.array() + 123.0, a);
  EXPECT_LE((w0 - w1).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GsaWeights, ConstantIntensityIsDegenerate) {
  EXPECT_THROW(gsa_weights(Matrix::Constant(10, 3, 4.0), column({0.2, 0.3, 0.5})),
               DegenerateError);
}
