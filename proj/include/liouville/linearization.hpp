#pragma once

// The linearized operator Kf = -v \int_0^x H(v f) on even fields, its
// invertibility margin, and the constrained half-Laplacian kernel check.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "liouville/fixed_point.hpp"
#include "liouville/linalg.hpp"
#include "liouville/parallel.hpp"

namespace liouville {

/// Trapezoid weights of an even field in half-grid coordinates j = 0..M, so
/// that \int f^2 over [-L, L] equals sum_j W_j f_j^2.
inline Eigen::VectorXd even_weights(const Grid& grid) {
  const int M = grid.M();
  Eigen::VectorXd W = Eigen::VectorXd::Constant(M + 1, 2.0 * grid.h());
  W(0) = grid.h();
  W(M) = grid.h();
  return W;
}

/// f -> -outer * \int_0^x H(inner * f) on half-grid even coordinates.
///
/// With outer = inner = v this is K; with outer = T(u), inner = u it is the
/// derivative of T at u.
class LinearizedOperator {
 public:
  LinearizedOperator(const Field& outer, const Field& inner)
      : grid_(inner.grid()), outer_(outer.half()), inner_(inner.values()), H_(hilbert_operator(inner.grid().size())) {
    detail::require_even(outer, "linearized operator");
    detail::require_even(inner, "linearized operator");
    if (grid_.M() < 4) throw ConfigError("linearized operator needs M >= 4");
  }
  explicit LinearizedOperator(const Field& v) : LinearizedOperator(v, v) {}

  const Grid& grid() const { return grid_; }
  Eigen::Index dim() const { return grid_.M() + 1; }

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const {
    const int M = grid_.M();
    std::vector<double> full(grid_.size());
    for (int j = -M; j <= M; ++j) full[grid_.index(j)] = inner_[grid_.index(j)] * f(std::abs(j));
    const std::vector<double> y = H_->apply(full);
    const double hh = 0.5 * grid_.h();
    Eigen::VectorXd out(M + 1);
    double acc = 0.0;
    out(0) = 0.0;
    for (int j = 1; j <= M; ++j) {
      acc += hh * (y[grid_.index(j - 1)] + y[grid_.index(j)]);
      out(j) = -outer_[static_cast<std::size_t>(j)] * acc;
    }
    return out;
  }

  /// Euclidean transpose of apply().
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& g) const {
    const int M = grid_.M();
    const double h = grid_.h();
    // cumulative trapezoid transposed: z_0 = h/2 sum_{i>=1} s_i, z_k = h/2 s_k + h sum_{i>k} s_i
    std::vector<double> s(static_cast<std::size_t>(M + 1));
    for (int j = 0; j <= M; ++j) s[static_cast<std::size_t>(j)] = -outer_[static_cast<std::size_t>(j)] * g(j);
    std::vector<double> z(grid_.size(), 0.0);
    double tail = 0.0;
    for (int k = M; k >= 1; --k) {
      z[grid_.index(k)] = 0.5 * h * s[static_cast<std::size_t>(k)] + h * tail;
      tail += s[static_cast<std::size_t>(k)];
    }
    z[grid_.index(0)] = 0.5 * h * tail;
    // H^T = -H because the symbol is odd
    const std::vector<double> p = H_->apply(z);
    Eigen::VectorXd out(M + 1);
    out(0) = -inner_[grid_.index(0)] * p[grid_.index(0)];
    for (int k = 1; k <= M; ++k) out(k) = -inner_[grid_.index(k)] * (p[grid_.index(k)] + p[grid_.index(-k)]);
    return out;
  }

 private:
  Grid grid_;
  std::vector<double> outer_;
  std::vector<double> inner_;
  std::shared_ptr<const ToeplitzOperator> H_;
};

/// Dense matrix of K in half-grid coordinates: column k is K applied to the
/// symmetrized hat at +/-x_k. O(M^2), columns built in parallel.
inline Eigen::MatrixXd build_KK_matrix(const Field& v) {
  detail::require_even(v, "build_KK_matrix");
  const Grid& g = v.grid();
  const int M = g.M();
  if (M < 4) throw ConfigError("build_KK_matrix needs M >= 4");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M + 1, M + 1);
  std::vector<double> c(static_cast<std::size_t>(2 * M + 1));
  for (int m = 0; m <= 2 * M; ++m) c[static_cast<std::size_t>(m)] = hilbert_coefficient(m);
  auto coef = [&](int m) { return m >= 0 ? c[static_cast<std::size_t>(m)] : -c[static_cast<std::size_t>(-m)]; };
  const double hh = 0.5 * g.h();
  parallel_for(static_cast<std::size_t>(M + 1), [&](std::size_t col) {
    const int k = static_cast<int>(col);
    const double vk = v.at(k);
    if (vk == 0.0) return;
    auto Hcol = [&](int i) { return k == 0 ? vk * coef(i) : vk * (coef(i - k) + coef(i + k)); };
    double acc = 0.0, prev = Hcol(0);
    for (int i = 1; i <= M; ++i) {
      const double cur = Hcol(i);
      acc += hh * (prev + cur);
      prev = cur;
      A(i, k) = -v.at(i) * acc;
    }
  });
  return A;
}

namespace detail {
/// Singular values of W^{1/2} (K - 1) W^{-1/2} by Lanczos.
inline linalg::LanczosResult weighted_margin(const LinearizedOperator& op, std::uint64_t seed) {
  const Eigen::VectorXd W = even_weights(op.grid());
  const Eigen::VectorXd sw = W.cwiseSqrt(), isw = sw.cwiseInverse();
  auto B = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const Eigen::VectorXd f = isw.cwiseProduct(x);
    return sw.cwiseProduct(op.apply(f) - f);
  };
  auto Bt = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    const Eigen::VectorXd g = sw.cwiseProduct(y);
    return isw.cwiseProduct(op.apply_transpose(g) - g);
  };
  return linalg::lanczos_singular_extremes(B, Bt, op.dim(), seed);
}
}  // namespace detail

/// Smallest singular value of K - 1 on even fields in the discrete L^2 norm.
inline double nondegeneracy_margin(const Field& v, std::uint64_t seed = 20240601) {
  return detail::weighted_margin(LinearizedOperator(v), seed).sigma_min;
}

/// Same quantity from a dense SVD; O(M^3), intended for cross-checks.
inline double nondegeneracy_margin_dense(const Field& v) {
  const Eigen::VectorXd sw = even_weights(v.grid()).cwiseSqrt();
  Eigen::MatrixXd A = build_KK_matrix(v);
  A.diagonal().array() -= 1.0;
  const Eigen::MatrixXd B = sw.asDiagonal() * A * sw.cwiseInverse().asDiagonal();
  return linalg::sigma_min_dense(B);
}

/// Dense half_laplacian - diag(v^2) on {even psi : psi(0) = 0}, coordinates j = 1..M.
inline Eigen::MatrixXd mono_operator_matrix(const Field& v) {
  detail::require_even(v, "mono_kernel_check");
  const Grid& g = v.grid();
  const int M = g.M();
  Eigen::MatrixXd A(M, M);
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t col) {
    const int k = static_cast<int>(col) + 1;
    std::vector<double> half(static_cast<std::size_t>(M + 1), 0.0);
    half[static_cast<std::size_t>(k)] = 1.0;
    const Field out = half_laplacian(Field::from_half(g, half, Parity::Even));
    for (int i = 1; i <= M; ++i) A(i - 1, k - 1) = out.at(i);
    A(k - 1, k - 1) -= v.at(k) * v.at(k);
  });
  return A;
}

/// Smallest singular value of the constrained operator in the discrete L^2_even norm.
inline double mono_kernel_check(const Field& v) {
  const Eigen::MatrixXd A = mono_operator_matrix(v);
  const Eigen::VectorXd sw = even_weights(v.grid()).tail(v.grid().M()).cwiseSqrt();
  const Eigen::MatrixXd B = sw.asDiagonal() * A * sw.cwiseInverse().asDiagonal();
  if (B.rows() <= 1024) return linalg::sigma_min_dense(B);
  return linalg::sigma_min_inverse_iteration(B);
}

/// Smooth random even direction: v(x) times a random cosine series.
inline Field random_even_direction(const Field& v, std::mt19937_64& rng) {
  const Grid& g = v.grid();
  std::uniform_real_distribution<double> coef(-1.0, 1.0), freq(0.2, 2.0);
  double a[4], k[4];
  for (int i = 0; i < 4; ++i) {
    a[i] = coef(rng);
    k[i] = freq(rng);
  }
  std::vector<double> half(static_cast<std::size_t>(g.M() + 1));
  for (int j = 0; j <= g.M(); ++j) {
    const double x = g.x(j);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += a[i] * std::cos(k[i] * x);
    half[static_cast<std::size_t>(j)] = v.at(j) * s;
  }
  return Field::from_half(g, half, Parity::Even);
}

/// Worst relative L^2 mismatch between the central difference of F(., lambda)
/// and (K - 1) d over random even directions d.
inline double frechet_fd_check(const Field& v, double lambda, const CurvatureProfile& K, double epsilon,
                               std::uint64_t seed = 7, int directions = 10) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) throw ConfigError("frechet_fd_check needs epsilon in [1e-7, 1e-3]");
  const LinearizedOperator op(v);
  const Eigen::VectorXd W = even_weights(v.grid());
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int n = 0; n < std::max(directions, 10); ++n) {
    const Field d = random_even_direction(v, rng);
    const Field fd = scaled(0.5 / epsilon, residual_F(axpby(1.0, v, epsilon, d), lambda, K) -
                                               residual_F(axpby(1.0, v, -epsilon, d), lambda, K));
    const Eigen::VectorXd dh = Eigen::Map<const Eigen::VectorXd>(d.half().data(), op.dim());
    const Eigen::VectorXd lin = op.apply(dh) - dh;
    const Eigen::VectorXd diff = Eigen::Map<const Eigen::VectorXd>(fd.half().data(), op.dim()) - lin;
    const double den = std::sqrt(lin.cwiseAbs2().dot(W));
    if (den == 0.0) continue;
    worst = std::max(worst, std::sqrt(diff.cwiseAbs2().dot(W)) / den);
  }
  return worst;
}

/// Both sides of the Carleman-Hankel identity for an even psi with g = psi':
/// \int_0^L H(g) g dx and -(1/pi) hankel_form(g on x_1..x_M).
struct CarlemanPair {
  double hilbert_side = 0.0;
  double hankel_side = 0.0;
};

inline CarlemanPair carleman_hankel_pair(const Field& psi) {
  const Grid& g = psi.grid();
  const Field dpsi = derivative(psi);
  const Field Hg = hilbert(dpsi);
  double lhs = 0.0;
  for (int j = 1; j <= g.M(); ++j) lhs += (j == g.M() ? 0.5 : 1.0) * Hg.at(j) * dpsi.at(j);
  lhs *= g.h();
  std::vector<double> gh(static_cast<std::size_t>(g.M()));
  for (int j = 1; j <= g.M(); ++j) gh[static_cast<std::size_t>(j - 1)] = dpsi.at(j);
  return {lhs, -hankel_form(g, gh) / std::numbers::pi};
}

struct LinearizationReport {
  double nondegeneracy_margin = 0.0;
  double mono_margin = 0.0;
  double fd_consistency = 0.0;
  double kk_norm = 0.0;  ///< largest singular value of K - 1
  int lanczos_iterations = 0;
  Grid grid{1.0, 1};
};

inline LinearizationReport linearize(const Field& v, double lambda, const CurvatureProfile& K, bool with_mono = true,
                                     std::uint64_t seed = 20240601) {
  LinearizationReport r;
  r.grid = v.grid();
  const auto lz = detail::weighted_margin(LinearizedOperator(v), seed);
  r.nondegeneracy_margin = lz.sigma_min;
  r.kk_norm = lz.sigma_max;
  r.lanczos_iterations = lz.iterations;
  r.mono_margin = with_mono ? mono_kernel_check(v) : NAN;
  r.fd_consistency = frechet_fd_check(v, lambda, K, 1e-5, seed);
  return r;
}

}  // namespace liouville
