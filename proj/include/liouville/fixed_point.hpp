#pragma once

// The map T_lambda(u) = lambda sqrt(K) exp(-1/2 \int_0^x H(u^2)) and the
// v <-> w dictionary.

#include <cmath>
#include <string>

#include "liouville/profile.hpp"
#include "liouville/transforms.hpp"

namespace liouville {

/// Exponent cap for T_lambda; larger values mean the iterate has run away.
inline constexpr double kExponentCap = 700.0;

namespace detail {
inline void require_even(const Field& u, const char* what) {
  if (u.parity() != Parity::Even) throw DomainError(std::string(what) + " needs an even field");
}

inline void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive and finite");
}

/// h_u = -\int_0^x H(u^2).
inline Field h_function(const Field& u) { return scaled(-1.0, cumint0(hilbert(square(u)))); }
}  // namespace detail

/// Exponent -1/2 \int_0^x H(u^2) of T_lambda(u), unchecked.
inline Field T_exponent(const Field& u) { return scaled(-0.5, cumint0(hilbert(square(u)))); }

inline Field apply_T(const Field& u, double lambda, const CurvatureProfile& K) {
  detail::require_even(u, "apply_T");
  detail::require_lambda(lambda);
  const Grid& g = u.grid();
  const Field e = T_exponent(u);
  double worst = -INFINITY;
  int worst_j = 0;
  for (int j = 0; j <= g.M(); ++j)
    if (e.at(j) > worst) {
      worst = e.at(j);
      worst_j = j;
    }
  if (worst > kExponentCap)
    throw NumericalError("T_lambda exponent " + std::to_string(worst) + " exceeds " + std::to_string(kExponentCap) +
                         " at x = " + std::to_string(g.x(worst_j)));
  std::vector<double> half(static_cast<std::size_t>(g.M() + 1));
  for (int j = 0; j <= g.M(); ++j) half[static_cast<std::size_t>(j)] = lambda * K.sqrtK(g.x(j)) * std::exp(e.at(j));
  return Field::from_half(g, half, Parity::Even);
}

/// F(u, lambda) = T_lambda(u) - u.
inline Field residual_F(const Field& u, double lambda, const CurvatureProfile& K) {
  return apply_T(u, lambda, K) - u;
}

/// Lambda = \int v^2 = \int K e^w.
inline double total_curvature(const Field& v) { return integrate(square(v)); }

/// w = log(v^2 / K).
inline Field w_from_v(const Field& v, const CurvatureProfile& K) {
  const Grid& g = v.grid();
  for (double s : v.values())
    if (!(s > 0.0)) throw DomainError("w_from_v needs v > 0 at every node");
  std::vector<double> out(g.size());
  for (int j = -g.M(); j <= g.M(); ++j) out[g.index(j)] = 2.0 * std::log(v.at(j)) - K.logK(g.x(j));
  const Parity p = v.parity() == Parity::Even ? Parity::Even : Parity::None;
  Field::mirror(g, out, p);
  return Field(g, std::move(out), p);
}

/// v = sqrt(K e^w), evaluated as exp((log K + w)/2).
inline Field v_from_w(const Field& w, const CurvatureProfile& K) {
  const Grid& g = w.grid();
  std::vector<double> out(g.size());
  for (int j = -g.M(); j <= g.M(); ++j) out[g.index(j)] = std::exp(0.5 * (K.logK(g.x(j)) + w.at(j)));
  const Parity p = w.parity() == Parity::Even ? Parity::Even : Parity::None;
  Field::mirror(g, out, p);
  return Field(g, std::move(out), p);
}

/// lambda = v(0)/sqrt(K(0)) = e^{w0/2}.
inline double lambda_from_w0(double w0) { return std::exp(0.5 * w0); }

}  // namespace liouville
