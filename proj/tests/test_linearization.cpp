#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "liouville/diagnostics.hpp"
#include "liouville/linearization.hpp"
#include "liouville/solver.hpp"

using namespace liouville;

namespace {
Field gaussian_solution(const Grid& g, double lambda = 1.0) {
  auto r = solve(lambda, CurvatureProfile::gaussian(), g);
  EXPECT_TRUE(r.converged);
  return r.v;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = d(rng);
  return x;
}
}  // namespace

TEST(KKMatrix, MatchesOperatorChain) {
  const Grid g(40.0, 256);
  const Field v = gaussian_solution(g);
  const Eigen::MatrixXd A = build_KK_matrix(v);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    const Eigen::VectorXd f = random_vector(g.M() + 1, rng);
    const Field ff = Field::from_half(g, std::vector<double>(f.data(), f.data() + f.size()), Parity::Even);
    const Field chain = scaled(-1.0, multiply(v, cumint0(hilbert(multiply(v, ff)))));
    const Eigen::VectorXd ref = Eigen::Map<const Eigen::VectorXd>(chain.half().data(), g.M() + 1);
    EXPECT_LE((A * f - ref).norm(), 1e-12 * ref.norm());
    EXPECT_LE((LinearizedOperator(v).apply(f) - ref).norm(), 1e-12 * ref.norm());
  }
  // column j is the chain applied to the symmetrized hat at +/- x_j
  for (int j : {0, 17, 256}) {
    std::vector<double> e(g.M() + 1, 0.0);
    e[j] = 1.0;
    const Field hat = Field::from_half(g, e, Parity::Even);
    const Field chain = scaled(-1.0, multiply(v, cumint0(hilbert(multiply(v, hat)))));
    for (int i = 0; i <= g.M(); ++i) EXPECT_NEAR(A(i, j), chain.at(i), 1e-14);
  }
}

TEST(KKMatrix, ZeroProfileGivesZeroMatrix) {
  const Grid g(10.0, 64);
  EXPECT_EQ(build_KK_matrix(Field::zeros(g)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(nondegeneracy_margin(Field::zeros(g)), 1.0, 1e-14);
  EXPECT_NEAR(nondegeneracy_margin_dense(Field::zeros(g)), 1.0, 1e-14);
}

TEST(KKMatrix, TransposeIsAdjoint) {
  const Grid g(40.0, 300);
  const LinearizedOperator op(gaussian_solution(g, 1.5));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 5; ++t) {
    const Eigen::VectorXd x = random_vector(op.dim(), rng), y = random_vector(op.dim(), rng);
    const double a = op.apply(x).dot(y), b = x.dot(op.apply_transpose(y));
    EXPECT_NEAR(a, b, 1e-12 * (std::abs(a) + 1.0));
  }
}

TEST(KKMatrix, SingularValuesDecay) {
  const Grid g(40.0, 256);
  const Eigen::VectorXd s = linalg::singular_values(build_KK_matrix(gaussian_solution(g)));
  EXPECT_LE(s((g.M() + 1) / 2) / s(0), 1e-3);
}

TEST(KKMatrix, BoundedIntoXForSoliton) {
  const Grid g(40.0, 2048);
  const auto s = exact_soliton(0.5, g);
  const LinearizedOperator op(s.v);
  std::mt19937_64 rng(4);
  double C = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Field f = random_even_direction(Field::sample(g, [](double x) { return 1 / (1 + x * x); }, Parity::Even), rng);
    const Eigen::VectorXd fh = Eigen::Map<const Eigen::VectorXd>(f.half().data(), g.M() + 1);
    const Eigen::VectorXd kf = op.apply(fh);
    const Field Kf = Field::from_half(g, std::vector<double>(kf.data(), kf.data() + kf.size()), Parity::Even);
    C = std::max(C, x_norm(Kf) / l2_norm(f));
  }
  EXPECT_TRUE(std::isfinite(C));
  EXPECT_LT(C, 100.0);
}

TEST(Margin, LanczosMatchesDense) {
  const Grid g(40.0, 256);
  for (double lambda : {0.05, 1.0, 2.0}) {
    const Field v = gaussian_solution(g, lambda);
    EXPECT_NEAR(nondegeneracy_margin(v), nondegeneracy_margin_dense(v), 1e-8) << lambda;
  }
}

TEST(Margin, GaussianBaselineAndRefinement) {
  const double m1 = nondegeneracy_margin(gaussian_solution(Grid(40.0, 4096)));
  const double m2 = nondegeneracy_margin(gaussian_solution(Grid(40.0, 8192)));
  EXPECT_GT(m1, 0.0);
  EXPECT_NEAR(m1, 0.7941, 2e-3);
  EXPECT_LT(std::abs(m2 - m1) / m1, 0.05);
}

TEST(Mono, PositiveMargins) {
  const Grid g(20.0, 512);
  EXPECT_GT(mono_kernel_check(Field::zeros(g)), 0.0);
  EXPECT_GT(mono_kernel_check(gaussian_solution(g)), 0.0);
}

TEST(Mono, OddSectorKernelExists) {
  // psi ~ 2/x is cut at |x| = L; at L = 40 that alone leaves a 1.3e-3 residual
  const Grid g(160.0, 16384);
  const Field psi = Field::sample(g, [](double x) { return 2 * x / (x * x + 1); }, Parity::Odd);
  const Field v2 = Field::sample(g, [](double x) { return 2 / (1 + x * x); }, Parity::Even);
  EXPECT_LE(l2_norm(half_laplacian(psi) - multiply(v2, psi)) / l2_norm(psi), 1e-3);
}

TEST(Frechet, CentralDifferenceAgrees) {
  const Grid g(40.0, 4096);
  const auto K = CurvatureProfile::gaussian();
  const Field v = gaussian_solution(g);
  EXPECT_LE(frechet_fd_check(v, 1.0, K, 1e-5), 1e-5);
  const double e3 = frechet_fd_check(v, 1.0, K, 1e-3), e4 = frechet_fd_check(v, 1.0, K, 1e-4);
  const double order = std::log10(e3 / e4);
  EXPECT_GT(order, 1.8);
  EXPECT_LT(order, 2.2);
  EXPECT_THROW(frechet_fd_check(v, 1.0, K, 1e-2), ConfigError);
}

TEST(Frechet, ZeroDirection) {
  const Grid g(40.0, 512);
  const auto K = CurvatureProfile::gaussian();
  const Field v = gaussian_solution(g);
  const Field d = Field::zeros(g);
  const Field fd = residual_F(axpby(1.0, v, 1e-5, d), 1.0, K) - residual_F(axpby(1.0, v, -1e-5, d), 1.0, K);
  for (double s : fd.values()) EXPECT_EQ(s, 0.0);
  EXPECT_EQ(LinearizedOperator(v).apply(Eigen::VectorXd::Zero(g.M() + 1)).norm(), 0.0);
}

TEST(CarlemanHankel, IdentityOnSyntheticProfiles) {
  const Grid g(60.0, 6000);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> a(0.3, 2.0), c(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const double s1 = a(rng), s2 = a(rng), c1 = c(rng);
    const Field psi = Field::sample(
        g, [&](double x) { return std::exp(-s1 * x * x) + c1 * std::exp(-s2 * x * x); }, Parity::Even);
    const auto p = carleman_hankel_pair(psi);
    EXPECT_LE(p.hankel_side, 0.0);
    EXPECT_NEAR(p.hilbert_side, p.hankel_side, 5e-3 * std::abs(p.hankel_side)) << t;
  }
}

TEST(Report, LinearizeFillsFields) {
  const Grid g(40.0, 512);
  const auto K = CurvatureProfile::gaussian();
  const auto r = linearize(gaussian_solution(g), 1.0, K);
  EXPECT_GT(r.nondegeneracy_margin, 0.0);
  EXPECT_GT(r.mono_margin, 0.0);
  EXPECT_LE(r.fd_consistency, 1e-5);
  EXPECT_TRUE(r.grid == g);
}
