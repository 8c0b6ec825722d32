// Follows the Gaussian-K branch from lambda = 0.05 to 2 and prints Lambda(lambda).

#include <cstdio>

#include "liouville/liouville.hpp"

int main() {
  using namespace liouville;
  const Grid grid(40.0, 4096);
  const CurvatureProfile K = CurvatureProfile::gaussian();
  const BranchResult b = continue_branch(K, grid, 0.05, 2.0, 40);
  std::printf("%10s %12s %12s %12s\n", "lambda", "w(0)", "Lambda", "margin");
  for (const auto& r : b.records)
    std::printf("%10.5f %12.6f %12.8f %12.6f\n", r.lambda, r.w0, r.Lambda_total, r.nondegeneracy_margin);
  if (!b.completed) {
    std::fprintf(stderr, "%s\n", b.error.c_str());
    return 1;
  }
  return 0;
}
