#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "liouville/transforms.hpp"
#include "oracles.hpp"

using namespace liouville;

namespace {
Field lorentzian(const Grid& g) {
  return Field::sample(g, [](double x) { return 1.0 / (1.0 + x * x); }, Parity::Even);
}

double interior_max_error(const Field& f, const std::function<double(double)>& exact) {
  const Grid& g = f.grid();
  double e = 0.0;
  for (int j = -g.M(); j <= g.M(); ++j)
    if (std::abs(g.x(j)) <= 0.5 * g.L()) e = std::max(e, std::abs(f.at(j) - exact(g.x(j))));
  return e;
}
}  // namespace

TEST(HilbertOracle, ClosedFormAgreesWithAdaptiveQuadrature) {
  auto f = [](double y) { return 1.0 / (1.0 + y * y); };
  for (int k = 0; k < 20; ++k) {
    const double x = -9.5 + k;
    EXPECT_NEAR(oracle::pv_hilbert(f, x), x / (1.0 + x * x), 1e-9) << x;
  }
}

TEST(Hilbert, LorentzianInteriorError) {
  const Grid g(40.0, 4096);
  const double e = interior_max_error(hilbert(lorentzian(g)), [](double x) { return x / (1.0 + x * x); });
  EXPECT_LE(e, 1e-4);
}

TEST(Hilbert, SecondOrderAgainstTruncatedClosedForm) {
  const double L = 40.0;
  double prev = 0.0;
  for (int M : {1024, 2048, 4096}) {
    const Grid g(L, M);
    const double e =
        interior_max_error(hilbert(lorentzian(g)), [L](double x) { return oracle::truncated_lorentzian_hilbert(x, L); });
    if (prev > 0.0) EXPECT_GE(std::log2(prev / e), 2.0 - 0.05);
    prev = e;
  }
}

TEST(Hilbert, ParityFlipsExactly) {
  const Grid g(20.0, 512);
  const Field even = Field::sample(g, [](double x) { return std::exp(-x * x); }, Parity::Even);
  const Field odd = Field::sample(g, [](double x) { return x * std::exp(-x * x); }, Parity::Odd);
  const Field He = hilbert(even), Ho = hilbert(odd);
  EXPECT_EQ(He.parity(), Parity::Odd);
  EXPECT_EQ(Ho.parity(), Parity::Even);
  EXPECT_TRUE(He.parity_exact());
  EXPECT_TRUE(Ho.parity_exact());
  EXPECT_EQ(derivative(even).parity(), Parity::Odd);
  EXPECT_EQ(half_laplacian(even).parity(), Parity::Even);
  EXPECT_EQ(cumint0(odd).parity(), Parity::Even);
  EXPECT_EQ(cumint0(odd).at(0), 0.0);
}

TEST(Hilbert, ReflectionSymmetry) {
  // H, d/dx and cumint0 anticommute with f(x) -> f(-x); the half-Laplacian commutes
  const Grid g(20.0, 512);
  const Field e = Field::sample(g, [](double x) { return 1.0 / (1.0 + x * x); }, Parity::Even);
  const Field o = Field::sample(g, [](double x) { return std::tanh(x) * std::exp(-x * x); }, Parity::Odd);
  const Field n = Field::sample(g, [](double x) { return std::exp(-(x - 1) * (x - 1)); });
  using Op = Field (*)(const Field&);
  const std::vector<std::pair<Op, double>> ops = {{+[](const Field& a) { return hilbert(a); }, -1.0},
                                                  {+[](const Field& a) { return derivative(a); }, -1.0},
                                                  {+[](const Field& a) { return half_laplacian(a); }, 1.0},
                                                  {+[](const Field& a) { return cumint0(a); }, -1.0}};
  for (const Field& f : {e, o, n}) {
    for (const auto& [op, sign] : ops) {
      const Field a = op(f.reflected());
      const Field b = scaled(sign, op(f).reflected());
      EXPECT_LT(l2_norm(a - b), 1e-13 * (1.0 + l2_norm(b)));
    }
  }
}

TEST(Hilbert, SignPropertyForSymmetricDecreasing) {
  const Grid g(40.0, 2048);
  std::vector<std::function<double(double)>> fs = {
      [](double x) { return std::exp(-x * x); },
      [](double x) { return 1.0 / (1.0 + x * x); },
      [](double x) { return 1.0 / std::pow(std::cosh(x), 2); },
      [](double x) { return std::max(0.0, 1.0 - std::abs(x) / 3.0); },
      [](double x) { return std::abs(x) < 2.0 ? 1.0 : 0.0; },
  };
  for (const auto& fn : fs) {
    const Field f = Field::sample(g, fn, Parity::Even);
    const Field H = hilbert(f);
    double fmax = 0.0;
    for (double s : f.values()) fmax = std::max(fmax, std::abs(s));
    for (int j = 0; j <= g.M(); ++j) EXPECT_GE(H.at(j), -1e-10 * fmax);
  }
}

TEST(Hilbert, AntiInvolutionImprovesWithL) {
  // H f ~ (\int f) / (pi x) is cut at |x| = L, so H H f + f decays like L^{-1/2}
  auto bump = [](double x) { return std::abs(x) < 3.0 ? std::exp(-1.0 / (9.0 - x * x)) : 0.0; };
  double prev = INFINITY;
  for (double L : {20.0, 80.0, 320.0}) {
    const Grid g(L, static_cast<int>(L * 50));
    const Field f = Field::sample(g, bump, Parity::Even);
    const double e = l2_norm(hilbert(hilbert(f)) + f) / l2_norm(f);
    if (std::isfinite(prev)) EXPECT_NEAR(prev / e, 2.0, 0.05) << L;
    prev = e;
  }
  EXPECT_LT(prev, 0.05);
}

TEST(Hilbert, FastMatchesDense) {
  const Grid g(30.0, 700);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  std::vector<double> v(g.size());
  for (auto& s : v) s = n(rng);
  const Field f(g, v);
  const Field a = hilbert(f, Backend::Fast), b = hilbert(f, Backend::Dense);
  const double e = l2_norm(a - b) / l2_norm(b);
  EXPECT_LT(e, 1e-13);
  const Field la = log_convolution(f, Backend::Fast), lb = log_convolution(f, Backend::Dense);
  EXPECT_LT(l2_norm(la - lb) / l2_norm(lb), 1e-13);
}

TEST(Hilbert, TooSmallGridIsConfigError) {
  EXPECT_THROW(hilbert(Field::zeros(Grid(1.0, 3))), ConfigError);
}

TEST(Toeplitz, SeriesBranchesAreContinuous) {
  // closed form evaluated in long double as reference across the switch at |m| = 8
  for (long m = 5; m <= 40; ++m) {
    auto xl = [](long double s) { return s == 0 ? 0.0L : s * std::log(std::fabs(s)); };
    const long double ref = (xl(m + 1.0L) - 2 * xl(static_cast<long double>(m)) + xl(m - 1.0L)) / std::numbers::pi_v<long double>;
    EXPECT_NEAR(hilbert_coefficient(m), static_cast<double>(ref), 1e-15);
    EXPECT_EQ(hilbert_coefficient(-m), -hilbert_coefficient(m));
    auto psi = [](long double s) { return 0.5L * s * s * std::log(std::fabs(s)) - 0.75L * s * s; };
    const long double J = psi(m + 1.0L) - 2 * psi(static_cast<long double>(m)) + psi(m - 1.0L);
    EXPECT_NEAR(log_kernel_coefficient(m), static_cast<double>(J), 1e-12);
    EXPECT_EQ(log_kernel_coefficient(-m), log_kernel_coefficient(m));
  }
  EXPECT_DOUBLE_EQ(log_kernel_coefficient(0), -1.5);
}

TEST(LogConvolution, MatchesQuadrature) {
  auto f = [](double y) { return std::exp(-y * y); };
  double prev = 0.0;
  for (int M : {1200, 2400, 4800}) {
    const Grid g(12.0, M);
    const Field lc = log_convolution(Field::sample(g, f, Parity::Even));
    double e = 0.0;
    for (int j : {0, M / 24, M / 7, M / 3, 5 * M / 8})
      e = std::max(e, std::abs(lc.at(j) - oracle::log_potential(f, g.x(j), -12.0, 12.0)));
    if (M == 2400) EXPECT_LT(e, 1e-5);
    if (prev > 0.0) EXPECT_GT(std::log2(prev / e), 1.9);
    prev = e;
  }
}

TEST(Derivative, Examples) {
  const Grid g(10.0, 200);
  const Field sq = Field::sample(g, [](double x) { return x * x; }, Parity::Even);
  const Field d = derivative(sq);
  for (int j = -g.M(); j <= g.M(); ++j) EXPECT_NEAR(d.at(j), 2.0 * g.x(j), 1e-10);
  const Field c = derivative(Field::sample(g, [](double) { return 3.5; }, Parity::Even));
  for (double s : c.values()) EXPECT_NEAR(s, 0.0, 1e-12);
}

TEST(Derivative, FourthOrderOnGaussian) {
  double prev = 0.0;
  for (int M : {200, 400, 800}) {
    const Grid g(8.0, M);
    const Field d = derivative(Field::sample(g, [](double x) { return std::exp(-x * x); }, Parity::Even));
    double e = 0.0;
    for (int j = -g.M(); j <= g.M(); ++j)
      e = std::max(e, std::abs(d.at(j) + 2.0 * g.x(j) * std::exp(-g.x(j) * g.x(j))));
    if (prev > 0.0) EXPECT_GT(std::log2(prev / e), 3.8);
    prev = e;
  }
}

TEST(HalfLaplacian, OddSectorIdentity) {
  // psi decays like 1/x, so the residual is set by the cut at |x| = L, not by h
  auto residual = [](double L, int M) {
    const Grid g(L, M);
    const Field psi = Field::sample(g, [](double x) { return 2.0 * x / (x * x + 1.0); }, Parity::Odd);
    const Field pot = Field::sample(g, [](double x) { return 2.0 / (1.0 + x * x); }, Parity::Even);
    return l2_norm(half_laplacian(psi) - multiply(pot, psi)) / l2_norm(psi);
  };
  const double r40 = residual(40.0, 4096);
  EXPECT_NEAR(residual(40.0, 2048), r40, 0.01 * r40);
  const double r80 = residual(80.0, 8192), r160 = residual(160.0, 16384);
  EXPECT_GT(std::log2(r40 / r80), 1.3);
  EXPECT_GT(std::log2(r80 / r160), 1.3);
  EXPECT_LE(r160, 1e-3);
}

TEST(HalfLaplacian, LorentzianAndConstant) {
  const Grid g(40.0, 4096);
  const double e = interior_max_error(half_laplacian(lorentzian(g)),
                                      [](double x) { return (1.0 - x * x) / std::pow(1.0 + x * x, 2); });
  EXPECT_LE(e, 1e-3);
  const Field c = half_laplacian(Field::sample(g, [](double) { return 1.0; }, Parity::Even));
  EXPECT_LT(interior_max_error(c, [](double) { return 0.0; }), 1e-12);
}

TEST(HalfLaplacian, HilbertAndDerivativeCommuteInInterior) {
  for (int M : {512, 1024, 2048}) {
    const Grid g(20.0, M);
    const Field f = Field::sample(g, [](double x) { return std::exp(-x * x); }, Parity::Even);
    const Field a = hilbert(derivative(f)), b = derivative(hilbert(f));
    double e = 0.0;
    for (int j = -g.M(); j <= g.M(); ++j)
      if (std::abs(g.x(j)) <= 10.0) e = std::max(e, std::abs(a.at(j) - b.at(j)));
    // both are Toeplitz away from the ends, so they commute up to roundoff
    EXPECT_LT(e, 1e-12) << M;
  }
}

TEST(Cumint0, Examples) {
  const Grid g(10.0, 1000);
  const Field one = cumint0(Field::sample(g, [](double) { return 1.0; }, Parity::Even));
  for (int j = -g.M(); j <= g.M(); ++j) EXPECT_NEAR(one.at(j), g.x(j), 1e-12);

  double prev = 0.0;
  for (int M : {500, 1000, 2000}) {
    const Grid gg(10.0, M);
    const Field c = cumint0(Field::sample(gg, [](double y) { return 2 * y / (1 + y * y); }, Parity::Odd));
    double e = 0.0;
    for (int j = -gg.M(); j <= gg.M(); ++j) e = std::max(e, std::abs(c.at(j) - std::log1p(gg.x(j) * gg.x(j))));
    if (prev > 0.0) EXPECT_NEAR(std::log2(prev / e), 2.0, 0.1);
    prev = e;
  }
}

TEST(Integrate, SolitonDensityAndHat) {
  const double mu = 0.5, L = 200.0;
  const Grid g(L, 8192);
  const Field f = Field::sample(g, [mu](double x) { return 2 * mu / (1 + mu * mu * x * x); }, Parity::Even);
  const double rel = std::abs(integrate(f) - 2 * std::numbers::pi) / (2 * std::numbers::pi);
  EXPECT_LE(rel, 2.0 / (mu * L * std::numbers::pi) + 1e-4);

  const Grid gh(5.0, 500);
  const Field hat = Field::sample(gh, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); }, Parity::Even);
  EXPECT_NEAR(integrate(hat), 1.0, 1e-14);
  EXPECT_EQ(integrate(Field::zeros(gh)), 0.0);
  EXPECT_EQ(x_norm(Field::zeros(gh)), 0.0);
}

TEST(XNorm, MatchesClosedFormForGaussian) {
  const Grid g(12.0, 4000);
  const Field f = Field::sample(g, [](double x) { return std::exp(-x * x / 2); }, Parity::Even);
  // \int f^2 = sqrt(pi), \int f'^2 = sqrt(pi)/2
  boost::math::quadrature::exp_sinh<double> es;
  const double logpart = 2.0 * es.integrate([](double x) { return std::log1p(x) * std::exp(-x * x); }, 0.0,
                                            std::numeric_limits<double>::infinity());
  const double exact = std::sqrt(1.5 * std::sqrt(std::numbers::pi) + logpart);
  EXPECT_NEAR(x_norm(f), exact, 1e-6);
}

TEST(Hankel, SingleNodeAndSymmetry) {
  const Grid g(10.0, 64);
  const auto A = hankel_matrix(g);
  EXPECT_EQ((A - A.transpose()).cwiseAbs().maxCoeff(), 0.0);
  for (int k : {0, 10, 63}) {
    std::vector<double> e(64, 0.0);
    e[k] = 1.0;
    const double w = (k == 63 ? 0.5 : 1.0) * g.h();
    EXPECT_DOUBLE_EQ(hankel_form(g, e), w * w / (2 * g.x(k + 1)));
    EXPECT_DOUBLE_EQ(A(k, k), w * w / (2 * g.x(k + 1)));
  }
}

TEST(Hankel, PositiveSemidefinite) {
  for (int M : {256, 512, 1024, 2048}) {
    const Grid g(40.0, M);
    const Eigen::MatrixXd A = hankel_matrix(g);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A, Eigen::EigenvaluesOnly).eigenvalues();
    EXPECT_GE(ev.minCoeff(), -1e-10 * ev.cwiseAbs().maxCoeff()) << M;
  }
  const Grid g(40.0, 1024);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1024);
    for (auto& s : v) s = n(rng);
    EXPECT_GE(hankel_form(g, v), 0.0);
  }
}

TEST(Hankel, AgreesWithLaplaceRepresentation) {
  auto gfun = [](double t) { return t * std::exp(-t); };
  const double exact = 1.0 / 3.0;  // \int_0^inf (1+u)^{-4} du
  EXPECT_NEAR(oracle::laplace_form(gfun, 60.0), exact, 1e-9);
  double prev = INFINITY;
  for (int M : {500, 1000, 2000}) {
    const Grid g(50.0, M);
    std::vector<double> s(M);
    for (int j = 1; j <= M; ++j) s[j - 1] = gfun(g.x(j));
    const double e = std::abs(hankel_form(g, s) - exact) / exact;
    EXPECT_LT(e, prev);
    prev = e;
  }
  EXPECT_LT(prev, 2e-3);
}
