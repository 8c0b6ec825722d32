#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "liouville/liouville.hpp"

namespace liouville::cli {

enum ExitCode { kOk = 0, kNumericalFailure = 1, kUsageError = 2 };

struct ProfileSpec {
  std::string kind = "gaussian";
  double delta = 0.5;
  double c = 1.0;
  std::string table;
};

struct RunConfig {
  ProfileSpec profile;
  double L = 40.0;
  int M = 4096;
  SolverOptions solver;
  double lambda_start = 0.05;
  std::optional<double> lambda_target = 1.0;
  std::optional<double> w0_target;
  int steps = 40;
  std::vector<double> lambda_list;
  Thresholds thresholds;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
};

/// Defaults as a JSON document.
io::json default_config_json();

/// Strict parse: unknown keys, wrong types and out-of-range values throw ConfigError.
RunConfig config_from_json(const io::json& j);
io::json config_to_json(const RunConfig& c);

CurvatureProfile make_profile(const ProfileSpec& p);

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_branch(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& c, const std::string& input_dir, std::ostream& out, std::ostream& err);
int cmd_selftest(const RunConfig& c, std::ostream& out, std::ostream& err);

/// Full command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liouville::cli
