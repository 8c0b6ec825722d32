// Solves K = 1 at lambda = 1 and compares with the closed-form soliton (mu = 1/2).

#include <cstdio>
#include <numbers>

#include "liouville/liouville.hpp"

int main() {
  using namespace liouville;
  const CurvatureProfile K = CurvatureProfile::constant(1.0);
  for (double L : {200.0, 800.0}) {
    const Grid grid(L, static_cast<int>(L / 200.0 * 8192));
    const SolveReport r = solve(1.0, K, grid);
    const ExactSoliton s = exact_soliton(0.5, grid);
    const double verr = l2_norm(r.v - s.v) / l2_norm(s.v);
    const double lerr = std::abs(r.Lambda_total - 2 * std::numbers::pi) / (2 * std::numbers::pi);
    std::printf("L = %5.0f  iterations %3d  |v - v_exact|/|v_exact| = %.3e  |Lambda - 2pi|/2pi = %.3e\n", L,
                r.iterations, verr, lerr);
  }
  return 0;
}
