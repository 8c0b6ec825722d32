#pragma once

// Operators on grid fields: Hilbert transform, derivatives, integrals, norms,
// the log-kernel potential and the half-line Hankel form.

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <vector>

#include "liouville/grid.hpp"
#include "liouville/toeplitz.hpp"

namespace liouville {

enum class Backend { Fast, Dense };

namespace detail {
/// Tags the raw output of a parity-flipping operator and enforces exact symmetry.
inline Field tag_flipped(const Grid& grid, std::vector<double> v, Parity in) {
  const Parity out = flipped(in);
  Field::mirror(grid, v, out);
  return Field(grid, std::move(v), out);
}
}  // namespace detail

/// Discrete Hilbert transform (1/pi) PV \int f(y)/(x-y) dy of the piecewise-linear
/// interpolant of f, zero outside [-L, L].
inline Field hilbert(const Field& f, Backend backend = Backend::Fast) {
  const Grid& g = f.grid();
  if (g.M() < 4) throw ConfigError("hilbert needs M >= 4");
  const auto op = hilbert_operator(g.size());
  auto y = backend == Backend::Fast ? op->apply(f.values()) : op->apply_dense(f.values());
  return detail::tag_flipped(g, std::move(y), f.parity());
}

/// Fourth-order finite-difference derivative; one-sided fourth-order stencils
/// at the two outermost nodes on each side.
inline Field derivative(const Field& f) {
  const Grid& g = f.grid();
  const std::size_t N = g.size();
  if (N < 5) throw ConfigError("derivative needs M >= 2");
  const double c = 1.0 / (12.0 * g.h());
  const auto& a = f.values();
  std::vector<double> d(N);
  for (std::size_t i = 2; i + 2 < N; ++i) d[i] = ((a[i - 2] - a[i + 2]) + 8.0 * (a[i + 1] - a[i - 1])) * c;
  d[0] = (-25.0 * a[0] + 48.0 * a[1] - 36.0 * a[2] + 16.0 * a[3] - 3.0 * a[4]) * c;
  d[1] = (-3.0 * a[0] - 10.0 * a[1] + 18.0 * a[2] - 6.0 * a[3] + a[4]) * c;
  const std::size_t n = N - 1;
  d[n] = (25.0 * a[n] - 48.0 * a[n - 1] + 36.0 * a[n - 2] - 16.0 * a[n - 3] + 3.0 * a[n - 4]) * c;
  d[n - 1] = (3.0 * a[n] + 10.0 * a[n - 1] - 18.0 * a[n - 2] + 6.0 * a[n - 3] - a[n - 4]) * c;
  return detail::tag_flipped(g, std::move(d), f.parity());
}

/// (-Delta)^{1/2} f = H(f').
inline Field half_laplacian(const Field& f, Backend backend = Backend::Fast) {
  return hilbert(derivative(f), backend);
}

/// Trapezoidal antiderivative \int_0^x f, pinned to 0 at x = 0.
inline Field cumint0(const Field& f) {
  const Grid& g = f.grid();
  const int M = g.M();
  const double hh = 0.5 * g.h();
  std::vector<double> out(g.size(), 0.0);
  for (int j = 1; j <= M; ++j) out[g.index(j)] = out[g.index(j - 1)] + hh * (f.at(j - 1) + f.at(j));
  for (int j = -1; j >= -M; --j) out[g.index(j)] = out[g.index(j + 1)] - hh * (f.at(j) + f.at(j + 1));
  return detail::tag_flipped(g, std::move(out), f.parity());
}

/// Trapezoid rule over [-L, L].
inline double integrate(const Field& f) {
  const auto& a = f.values();
  double s = 0.5 * (a.front() + a.back());
  for (std::size_t i = 1; i + 1 < a.size(); ++i) s += a[i];
  return s * f.grid().h();
}

inline double l2_norm(const Field& f) { return std::sqrt(integrate(square(f))); }

/// Norm of the weighted space X: |f|_{H^1}^2 + \int log(1+|x|) f^2.
inline double x_norm(const Field& f) {
  const Grid& g = f.grid();
  const Field df = derivative(f);
  const Field logw = Field::sample(g, [](double x) { return std::log1p(std::abs(x)); }, Parity::Even);
  const double s = integrate(square(f)) + integrate(square(df)) + integrate(multiply(logw, square(f)));
  return std::sqrt(std::max(s, 0.0));
}

/// \int log|x_i - y| rho(y) dy for the piecewise-linear interpolant of rho.
inline Field log_convolution(const Field& rho, Backend backend = Backend::Fast) {
  const Grid& g = rho.grid();
  const auto op = log_kernel_operator(g.size());
  auto y = backend == Backend::Fast ? op->apply(rho.values()) : op->apply_dense(rho.values());
  const double h = g.h();
  double mass = 0.0;
  for (double r : rho.values()) mass += r;
  const double shift = h * std::log(h) * mass;
  for (double& v : y) v = h * v + shift;
  Field::mirror(g, y, rho.parity());
  return Field(g, std::move(y), rho.parity());
}

/// Nodes x_1..x_M with trapezoid weights of the half-line [0, L] (x_0 excluded).
inline std::vector<double> half_line_weights(const Grid& grid) {
  std::vector<double> w(static_cast<std::size_t>(grid.M()), grid.h());
  w.back() = 0.5 * grid.h();
  return w;
}

/// A_{ij} = w_i w_j / (x_i + x_j) on the nodes x_1..x_M.
inline Eigen::MatrixXd hankel_matrix(const Grid& grid) {
  const int M = grid.M();
  const auto w = half_line_weights(grid);
  Eigen::MatrixXd A(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = w[i] * w[j] / (grid.x(i + 1) + grid.x(j + 1));
      A(i, j) = v;
      A(j, i) = v;
    }
  return A;
}

/// g^T A g with A the Hankel matrix; g holds samples at x_1..x_M.
inline double hankel_form(const Grid& grid, std::span<const double> g) {
  const int M = grid.M();
  if (g.size() != static_cast<std::size_t>(M)) throw DomainError("hankel_form needs M samples");
  const auto w = half_line_weights(grid);
  double s = 0.0;
  for (int i = 0; i < M; ++i) {
    const double wi = w[i] * g[i];
    double row = 0.5 * wi / (2.0 * grid.x(i + 1));
    for (int j = 0; j < i; ++j) row += w[j] * g[j] / (grid.x(i + 1) + grid.x(j + 1));
    s += 2.0 * wi * row;
  }
  return s;
}

}  // namespace liouville
