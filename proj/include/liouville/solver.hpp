#pragma once

// Picard, Newton and hybrid solvers for the fixed-point problem v = T_lambda(v).

#include <cmath>
#include <optional>
#include <string>

#include "liouville/fixed_point.hpp"
#include "liouville/linearization.hpp"

namespace liouville {

enum class Method { Picard, Newton, Hybrid };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Picard: return "picard";
    case Method::Newton: return "newton";
    case Method::Hybrid: return "hybrid";
  }
  return "hybrid";
}

inline Method method_from_string(const std::string& s) {
  if (s == "picard") return Method::Picard;
  if (s == "newton") return Method::Newton;
  if (s == "hybrid") return Method::Hybrid;
  throw ConfigError("unknown solver method '" + s + "'");
}

struct SolverOptions {
  Method method = Method::Hybrid;
  std::optional<double> theta;  ///< Picard damping; default 1 for lambda <= 1, else 0.5
  double tol = 1e-10;           ///< on the L^2 norm of F
  int max_iter = 2000;          ///< Picard iterations
  int newton_max_iter = 30;
  double hybrid_switch_tol = 1e-6;
  double gmres_tol = 1e-10;
  double margin_floor = 1e-6;
};

struct SolveReport {
  Field v = Field::zeros(Grid(1.0, 1));
  Field w = Field::zeros(Grid(1.0, 1));
  double lambda = 0.0;
  double v0 = 0.0;
  double w0 = 0.0;
  double Lambda_total = 0.0;
  int iterations = 0;
  int newton_steps = 0;
  double residual_l2 = INFINITY;
  double residual_x = INFINITY;
  bool converged = false;
  double contraction_estimate = NAN;
  bool assumption_A_violated = false;
  std::string method;
  std::string message;
};

/// Default Picard damping.
inline double default_theta(double lambda) { return lambda <= 1.0 ? 1.0 : 0.5; }

/// Largest violation of v(x_j) >= v(x_{j+1}) on j >= 0, relative to v(0).
inline double monotonicity_defect(const Field& v) {
  double worst = 0.0;
  for (int j = 0; j < v.grid().M(); ++j) worst = std::max(worst, v.at(j + 1) - v.at(j));
  return v.at(0) > 0.0 ? worst / v.at(0) : worst;
}

namespace detail {

struct Eval {
  Field T;
  double norm;
};

/// T(u) and ||T(u) - u||_2; norm is +inf if T overflows.
inline std::optional<Eval> evaluate(const Field& u, double lambda, const CurvatureProfile& K) {
  try {
    Field T = apply_T(u, lambda, K);
    const double r = l2_norm(T - u);
    if (!std::isfinite(r)) return std::nullopt;
    return Eval{std::move(T), r};
  } catch (const NumericalError&) {
    return std::nullopt;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

/// Fills the derived fields of a report from its v.
inline void finalize(SolveReport& r, const CurvatureProfile& K, double tol) {
  const Field& v = r.v;
  r.v0 = v.at(0);
  r.w0 = 2.0 * std::log(r.lambda);
  r.Lambda_total = total_curvature(v);
  r.assumption_A_violated = K.violates_assumption_A();
  // log-domain w: 2 log lambda + h_v, finite where K and v underflow
  r.w = axpby(1.0, Field::sample(v.grid(), [&](double) { return r.w0; }, Parity::Even), 1.0, detail::h_function(v));
  try {
    const Field F = residual_F(v, r.lambda, K);
    r.residual_l2 = l2_norm(F);
    r.residual_x = x_norm(F);
  } catch (const Error&) {
    r.residual_l2 = r.residual_x = INFINITY;
  }
  if (r.converged && !(r.residual_l2 <= tol)) {
    r.converged = false;
    r.message = "residual above tolerance after final evaluation";
  }
  if (r.converged && monotonicity_defect(v) > 1e-8) {
    r.converged = false;
    r.message = "converged profile is not symmetric-decreasing";
  }
}

inline Field initial_guess(const std::optional<Field>& init, double lambda, const CurvatureProfile& K,
                           const Grid& grid) {
  if (init) {
    if (!(init->grid() == grid)) throw ConfigError("initial guess lives on a different grid");
    require_even(*init, "initial guess");
    return *init;
  }
  return scaled(lambda, K.sqrtK_field(grid));
}

}  // namespace detail

/// Damped Picard iteration u <- (1 - theta) u + theta T(u). On success the
/// returned v is T of the last iterate, so v(0) = lambda sqrt(K(0)) exactly.
inline SolveReport solve_picard(double lambda, const CurvatureProfile& K, const Grid& grid,
                                const std::optional<Field>& init = std::nullopt, const SolverOptions& opt = {}) {
  detail::require_lambda(lambda);
  const double theta = opt.theta.value_or(default_theta(lambda));
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("damping theta must lie in (0, 1]");
  if (!(opt.tol > 0.0)) throw ConfigError("tolerance must be positive");

  SolveReport r;
  r.lambda = lambda;
  r.method = "picard";
  Field u = detail::initial_guess(init, lambda, K, grid);
  double first = NAN, last = NAN;
  int ratios = 0;
  for (int it = 0; it < opt.max_iter; ++it) {
    auto e = detail::evaluate(u, lambda, K);
    ++r.iterations;
    if (!e) {
      r.message = "T_lambda overflowed at iteration " + std::to_string(it);
      break;
    }
    if (std::isnan(first)) first = e->norm;
    else ++ratios;
    last = e->norm;
    if (e->norm <= opt.tol) {
      auto check = detail::evaluate(e->T, lambda, K);
      if (check && check->norm <= opt.tol) {
        u = std::move(e->T);
        r.converged = true;
        break;
      }
    }
    u = theta == 1.0 ? std::move(e->T) : axpby(1.0 - theta, u, theta, e->T);
  }
  if (ratios > 0 && first > 0.0 && last > 0.0) r.contraction_estimate = std::pow(last / first, 1.0 / ratios);
  if (!r.converged && r.message.empty()) r.message = "Picard did not reach tolerance in " + std::to_string(opt.max_iter) + " iterations";
  r.v = std::move(u);
  detail::finalize(r, K, opt.tol);
  return r;
}

/// Newton's method on F(u) = T(u) - u with matrix-free GMRES on the exact
/// Jacobian and a backtracking line search.
inline SolveReport solve_newton(double lambda, const CurvatureProfile& K, const Grid& grid,
                                const std::optional<Field>& init = std::nullopt, const SolverOptions& opt = {}) {
  detail::require_lambda(lambda);
  if (!(opt.tol > 0.0)) throw ConfigError("tolerance must be positive");
  SolveReport r;
  r.lambda = lambda;
  r.method = "newton";
  Field u = detail::initial_guess(init, lambda, K, grid);
  auto e = detail::evaluate(u, lambda, K);
  if (!e) {
    r.message = "T_lambda overflowed at the initial guess";
    r.v = std::move(u);
    detail::finalize(r, K, opt.tol);
    return r;
  }
  const int n = grid.M() + 1;
  for (int step = 0; step < opt.newton_max_iter && e->norm > opt.tol; ++step) {
    const LinearizedOperator J(e->T, u);
    const Eigen::VectorXd F = Eigen::Map<const Eigen::VectorXd>((e->T - u).half().data(), n);
    auto A = [&](const Eigen::VectorXd& d) -> Eigen::VectorXd { return J.apply(d) - d; };
    const auto sol = linalg::gmres(A, -F, opt.gmres_tol, 400);
    if (!sol.converged) {
      const double margin = detail::weighted_margin(J, 20240601).sigma_min;
      if (margin < opt.margin_floor)
        throw NumericalError("Newton system is singular: nondegeneracy margin " + std::to_string(margin) +
                             " below floor " + std::to_string(opt.margin_floor));
    }
    const Field delta = Field::from_half(grid, std::vector<double>(sol.x.data(), sol.x.data() + n), Parity::Even);
    bool accepted = false;
    for (double t = 1.0; t >= 1.0 / 1024.0; t *= 0.5) {
      Field trial = axpby(1.0, u, t, delta);
      auto et = detail::evaluate(trial, lambda, K);
      if (et && et->norm < (1.0 - 1e-4 * t) * e->norm) {
        u = std::move(trial);
        e = std::move(et);
        accepted = true;
        break;
      }
    }
    ++r.newton_steps;
    ++r.iterations;
    if (!accepted) {
      r.message = "Newton line search failed at step " + std::to_string(step);
      break;
    }
  }
  r.converged = e->norm <= opt.tol;
  if (r.converged) {
    // prefer T(u), which carries v(0) = lambda sqrt(K(0)) exactly
    auto check = detail::evaluate(e->T, lambda, K);
    if (check && check->norm <= opt.tol) u = std::move(e->T);
  }
  if (!r.converged && r.message.empty()) r.message = "Newton did not reach tolerance";
  r.v = std::move(u);
  detail::finalize(r, K, opt.tol);
  return r;
}

/// Dispatches on opt.method. Hybrid runs Picard to a loose tolerance, then Newton.
inline SolveReport solve(double lambda, const CurvatureProfile& K, const Grid& grid,
                         const std::optional<Field>& init = std::nullopt, const SolverOptions& opt = {}) {
  switch (opt.method) {
    case Method::Picard: return solve_picard(lambda, K, grid, init, opt);
    case Method::Newton: return solve_newton(lambda, K, grid, init, opt);
    case Method::Hybrid: break;
  }
  SolverOptions loose = opt;
  loose.tol = std::max(opt.tol, opt.hybrid_switch_tol);
  SolveReport p = solve_picard(lambda, K, grid, init, loose);
  const int picard_iters = p.iterations;
  SolveReport n = solve_newton(lambda, K, grid, p.v, opt);
  n.iterations += picard_iters;
  n.contraction_estimate = p.contraction_estimate;
  n.method = "hybrid";
  return n;
}

}  // namespace liouville
