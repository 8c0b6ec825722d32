#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "liouville/continuation.hpp"
#include "liouville/diagnostics.hpp"

using namespace liouville;

namespace {
const Grid kRef(40.0, 4096);
}

TEST(Branch, GaussianFortySteps) {
  const auto K = CurvatureProfile::gaussian();
  ContinuationOptions o;
  o.keep_profiles = true;
  const auto b = continue_branch(K, kRef, 0.05, 2.0, 40, o);
  ASSERT_TRUE(b.completed) << b.error;
  ASSERT_EQ(b.records.size(), 41u);
  ASSERT_EQ(b.profiles.size(), 41u);
  EXPECT_EQ(b.records.front().lambda, 0.05);
  EXPECT_EQ(b.records.back().lambda, 2.0);
  double max_slope = 0.0;
  for (std::size_t k = 0; k < b.records.size(); ++k) {
    const auto& r = b.records[k];
    EXPECT_TRUE(r.converged);
    EXPECT_GT(r.nondegeneracy_margin, 0.0);
    EXPECT_GT(r.Lambda_total, 0.0);
    EXPECT_LT(r.Lambda_total, 2 * std::numbers::pi);
    EXPECT_EQ(r.v0, r.lambda * K.sqrtK(0.0));
    if (k > 0) {
      EXPECT_GT(r.lambda, b.records[k - 1].lambda);
      const double d = l2_norm(b.profiles[k] - b.profiles[k - 1]) / (r.lambda - b.records[k - 1].lambda);
      max_slope = std::max(max_slope, d);
    }
  }
  // C^1 branch: difference quotients stay bounded
  EXPECT_LT(max_slope, 10.0);
}

TEST(Branch, SingleRecordEqualsDirectSolve) {
  const auto K = CurvatureProfile::gaussian();
  ContinuationOptions o;
  o.keep_profiles = true;
  const auto b = continue_branch(K, kRef, 0.7, 0.7, 5, o);
  ASSERT_EQ(b.records.size(), 1u);
  const auto r = solve(0.7, K, kRef, std::nullopt, o.solver);
  EXPECT_EQ(b.profiles[0].values(), r.v.values());
  EXPECT_EQ(b.records[0].Lambda_total, r.Lambda_total);
}

TEST(Branch, InvalidLadders) {
  const auto K = CurvatureProfile::gaussian();
  EXPECT_THROW(continue_branch(K, kRef, 0.05, 1.0, 0), ConfigError);
  EXPECT_THROW(continue_branch(K, kRef, 1.0, 0.5, 4), ConfigError);
  EXPECT_THROW(continue_branch(K, kRef, 0.0, 0.5, 4), ConfigError);
}

TEST(Branch, ConstantKStaysNearTwoPi) {
  const Grid g(200.0, 8192);
  const auto b = continue_branch(CurvatureProfile::constant(1.0), g, 0.1, 1.0, 10);
  ASSERT_TRUE(b.completed) << b.error;
  EXPECT_TRUE(b.assumption_A_violated);
  for (const auto& r : b.records) {
    const double mu = r.lambda * r.lambda / 2;
    // mass of 2 mu / (1 + mu^2 x^2) outside [-L, L]
    const double tail = (2 / std::numbers::pi) * (std::numbers::pi / 2 - std::atan(mu * g.L()));
    EXPECT_NEAR(r.Lambda_total / (2 * std::numbers::pi), 1.0, 1.1 * tail + 1e-3) << r.lambda;
  }
}

TEST(Branch, PathIndependence) {
  const auto K = CurvatureProfile::gaussian();
  ContinuationOptions o;
  o.keep_profiles = true;
  const auto a = continue_branch(K, kRef, 0.05, 1.0, 10, o);
  const auto b = continue_branch(K, kRef, 0.05, 1.0, 20, o);
  ASSERT_TRUE(a.completed && b.completed);
  EXPECT_LT(l2_norm(a.profiles.back() - b.profiles.back()), 1e-6);
}

TEST(Branch, RandomInitsAgreeAtFirstRung) {
  const auto K = CurvatureProfile::gaussian();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> amp(0.0, 0.2), width(0.2, 3.0);
  const auto ref = solve(0.05, K, kRef);
  for (int t = 0; t < 5; ++t) {
    const double a = amp(rng), w = width(rng);
    const Field init = Field::sample(kRef, [a, w](double x) { return a * std::exp(-x * x / (w * w)); }, Parity::Even);
    const auto r = solve(0.05, K, kRef, init);
    ASSERT_TRUE(r.converged);
    EXPECT_LE(l2_norm(r.v - ref.v), 1e-8);
  }
}

TEST(SolveForW0, GaussianAndSoliton) {
  const auto g0 = solve_for_w0(CurvatureProfile::gaussian(), kRef, 0.0);
  EXPECT_EQ(g0.lambda, 1.0);
  EXPECT_TRUE(g0.converged);

  const Grid g(200.0, 8192);
  const auto s = solve_for_w0(CurvatureProfile::constant(1.0), g, std::log(2.0));
  EXPECT_DOUBLE_EQ(s.lambda, std::sqrt(2.0));
  const auto ex = exact_soliton(1.0, g);
  double err = 0.0;
  for (int j = -g.M(); j <= g.M(); ++j)
    if (std::abs(g.x(j)) <= 0.5 * g.L()) err = std::max(err, std::abs(s.w.at(j) - ex.w.at(j)));
  EXPECT_LT(err, 0.05);
  EXPECT_NEAR(s.w0, std::log(2.0), 1e-15);
}

TEST(SolveForW0, StepCountIndependence) {
  const auto K = CurvatureProfile::gaussian();
  const auto a = solve_for_w0(K, kRef, 0.5, {}, 8);
  const auto b = solve_for_w0(K, kRef, 0.5, {}, 30);
  EXPECT_LT(l2_norm(a.v - b.v), 1e-6);
}

TEST(CurvatureMap, GaussianTableAndEdgeCases) {
  const auto K = CurvatureProfile::gaussian();
  const auto m = lambda_curvature_map(K, kRef, {0.1, 0.5, 1.0, 2.0, 3.0});
  ASSERT_EQ(m.lambda.size(), 5u);
  for (double L : m.Lambda) {
    EXPECT_GT(L, 0.0);
    EXPECT_LT(L, 2 * std::numbers::pi);
  }
  EXPECT_TRUE(m.strictly_monotone);
  EXPECT_TRUE(lambda_curvature_map(K, kRef, {}).lambda.empty());

  const Grid g(200.0, 8192);
  const auto c = lambda_curvature_map(CurvatureProfile::constant(1.0), g, {0.5, 1.0, 1.5});
  ASSERT_EQ(c.Lambda.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    const double mu = c.lambda[k] * c.lambda[k] / 2;
    const double tail = 2 * std::numbers::pi * (2 / std::numbers::pi) * (std::numbers::pi / 2 - std::atan(mu * g.L()));
    EXPECT_LT(c.Lambda[k], 2 * std::numbers::pi);
    EXPECT_NEAR(c.Lambda[k], 2 * std::numbers::pi, 1.1 * tail + 1e-3);
  }
}
