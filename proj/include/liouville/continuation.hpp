#pragma once

// Parameter continuation of the branch lambda -> v_lambda.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "liouville/solver.hpp"

namespace liouville {

struct BranchRecord {
  double lambda = 0.0;
  double v0 = 0.0;
  double w0 = 0.0;
  double Lambda_total = 0.0;
  double residual_l2 = 0.0;
  double nondegeneracy_margin = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct ContinuationOptions {
  SolverOptions solver;
  double margin_floor = 1e-6;
  bool compute_margin = true;
  bool keep_profiles = false;
  double max_step_ratio = 1.1;  ///< geometric step used when a rung count is derived
};

struct BranchResult {
  std::vector<BranchRecord> records;
  std::vector<Field> profiles;  ///< v per record when keep_profiles is set
  std::optional<SolveReport> terminal;
  bool completed = false;
  std::optional<double> failed_lambda;
  std::string error;
  bool assumption_A_violated = false;
};

/// lambda_k = start (target/start)^{k/steps}, k = 0..steps, last rung exactly target.
inline std::vector<double> geometric_ladder(double start, double target, int steps) {
  if (steps < 1) throw ConfigError("continuation needs at least one step");
  if (!(start > 0.0) || !(target >= start) || !std::isfinite(target))
    throw ConfigError("continuation needs 0 < lambda_start <= lambda_target");
  if (target == start) return {start};
  std::vector<double> ladder(static_cast<std::size_t>(steps) + 1);
  const double ratio = target / start;
  for (int k = 0; k <= steps; ++k) ladder[static_cast<std::size_t>(k)] = start * std::pow(ratio, double(k) / steps);
  ladder.front() = start;
  ladder.back() = target;
  return ladder;
}

/// Number of geometric rungs so that consecutive lambdas differ by at most `ratio`.
inline int rungs_for(double start, double target, double ratio) {
  if (target <= start) return 1;
  return std::max(1, static_cast<int>(std::ceil(std::log(target / start) / std::log(ratio) - 1e-12)));
}

namespace detail {

inline BranchResult run_ladder(const CurvatureProfile& K, const Grid& grid, const std::vector<double>& ladder,
                               const ContinuationOptions& opt) {
  BranchResult out;
  out.assumption_A_violated = K.violates_assumption_A();
  std::optional<Field> prev, prev2;
  double lprev = 0.0, lprev2 = 0.0;
  for (double lambda : ladder) {
    std::optional<Field> guess;
    if (prev && prev2) {
      const double s = (lambda - lprev) / (lprev - lprev2);
      guess = axpby(1.0 + s, *prev, -s, *prev2);
    } else if (prev) {
      guess = scaled(lambda / lprev, *prev);
    }
    SolveReport rep;
    try {
      rep = solve(lambda, K, grid, guess, opt.solver);
    } catch (const Error& e) {
      out.failed_lambda = lambda;
      out.error = "solve failed at lambda = " + std::to_string(lambda) + ": " + e.what();
      return out;
    }
    BranchRecord rec;
    rec.lambda = lambda;
    rec.v0 = rep.v0;
    rec.w0 = rep.w0;
    rec.Lambda_total = rep.Lambda_total;
    rec.residual_l2 = rep.residual_l2;
    rec.iterations = rep.iterations;
    rec.converged = rep.converged;
    rec.nondegeneracy_margin = opt.compute_margin ? nondegeneracy_margin(rep.v) : NAN;
    out.records.push_back(rec);
    if (opt.keep_profiles) out.profiles.push_back(rep.v);
    if (!rep.converged) {
      out.failed_lambda = lambda;
      out.error = "no convergence at lambda = " + std::to_string(lambda) + ": " + rep.message;
      out.terminal = std::move(rep);
      return out;
    }
    if (opt.compute_margin && !(rec.nondegeneracy_margin >= opt.margin_floor)) {
      out.failed_lambda = lambda;
      out.error = "nondegeneracy margin " + std::to_string(rec.nondegeneracy_margin) + " below floor at lambda = " +
                  std::to_string(lambda);
      out.terminal = std::move(rep);
      return out;
    }
    prev2 = std::move(prev);
    lprev2 = lprev;
    prev = rep.v;
    lprev = lambda;
    out.terminal = std::move(rep);
  }
  out.completed = true;
  return out;
}

}  // namespace detail

/// Follows the branch over a geometric ladder with `steps` intervals. Each rung
/// is warm-started (secant predictor once two points exist) and solved by the
/// configured method. Stops at the first failing rung and returns the partial branch.
inline BranchResult continue_branch(const CurvatureProfile& K, const Grid& grid, double lambda_start,
                                    double lambda_target, int steps, const ContinuationOptions& opt = {}) {
  return detail::run_ladder(K, grid, geometric_ladder(lambda_start, lambda_target, steps), opt);
}

/// Solution with w(0) = w0, reached by continuation from min(0.05, lambda).
inline SolveReport solve_for_w0(const CurvatureProfile& K, const Grid& grid, double w0,
                                const ContinuationOptions& opt = {}, std::optional<int> steps = std::nullopt) {
  if (!std::isfinite(w0)) throw ConfigError("w0 must be finite");
  const double lambda = lambda_from_w0(w0);
  const double start = std::min(0.05, lambda);
  ContinuationOptions o = opt;
  o.keep_profiles = false;
  const int n = steps.value_or(rungs_for(start, lambda, opt.max_step_ratio));
  BranchResult b = continue_branch(K, grid, start, lambda, n, o);
  if (!b.completed) throw NumericalError(b.error);
  return std::move(*b.terminal);
}

struct CurvatureMap {
  std::vector<double> lambda;
  std::vector<double> Lambda;
  bool strictly_monotone = true;
  BranchResult branch;
};

/// Tabulates Lambda(lambda) along one branch passing through every listed lambda.
inline CurvatureMap lambda_curvature_map(const CurvatureProfile& K, const Grid& grid, std::vector<double> lambdas,
                                         const ContinuationOptions& opt = {}) {
  CurvatureMap map;
  if (lambdas.empty()) return map;
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
  if (!(lambdas.front() > 0.0)) throw ConfigError("lambda list must be positive");

  std::vector<double> ladder;
  std::vector<std::size_t> marks;
  double from = std::min(0.05, lambdas.front());
  ladder.push_back(from);
  for (double target : lambdas) {
    if (target > from) {
      const auto seg = geometric_ladder(from, target, rungs_for(from, target, opt.max_step_ratio));
      ladder.insert(ladder.end(), seg.begin() + 1, seg.end());
      from = target;
    }
    marks.push_back(ladder.size() - 1);
  }
  map.branch = detail::run_ladder(K, grid, ladder, opt);
  for (std::size_t m : marks) {
    if (m >= map.branch.records.size() || !map.branch.records[m].converged) break;
    map.lambda.push_back(map.branch.records[m].lambda);
    map.Lambda.push_back(map.branch.records[m].Lambda_total);
  }
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < map.Lambda.size(); ++i) {
    inc = inc && map.Lambda[i] > map.Lambda[i - 1];
    dec = dec && map.Lambda[i] < map.Lambda[i - 1];
  }
  map.strictly_monotone = inc || dec;
  return map;
}

}  // namespace liouville
