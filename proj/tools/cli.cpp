#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"

#ifndef LIOUVILLE_VERSION
#define LIOUVILLE_VERSION "dev"
#endif

namespace liouville::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be a JSON object");
  for (const auto& [k, _] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

double get_double(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::optional<double> get_opt_double(const json& obj, const char* key, std::optional<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number or null");
  return v.get<double>();
}

long long get_int(const json& obj, const char* key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return v.get<long long>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

void validate(const RunConfig& c) {
  make_profile(c.profile);
  Grid(c.L, c.M);
  if (c.M < 4) throw ConfigError("grid must have M >= 4");
  if (c.solver.theta && !(*c.solver.theta > 0.0 && *c.solver.theta <= 1.0))
    throw ConfigError("theta must lie in (0, 1]");
  if (!(c.solver.tol > 0.0)) throw ConfigError("tol must be positive");
  if (c.solver.max_iter < 1 || c.solver.newton_max_iter < 0) throw ConfigError("iteration limits must be positive");
  if (!(c.lambda_start > 0.0)) throw ConfigError("lambda_start must be positive");
  if (c.lambda_target && c.w0_target) throw ConfigError("give either lambda or w0, not both");
  if (!c.lambda_target && !c.w0_target) throw ConfigError("a target lambda or w0 is required");
  if (c.lambda_target && !(*c.lambda_target > 0.0)) throw ConfigError("lambda must be positive");
  if (c.w0_target && !std::isfinite(*c.w0_target)) throw ConfigError("w0 must be finite");
  if (c.steps < 1) throw ConfigError("steps must be at least 1");
  for (double l : c.lambda_list)
    if (!(l > 0.0)) throw ConfigError("lambda list entries must be positive");
  if (c.output_dir.empty()) throw ConfigError("output directory must not be empty");
  const CurvatureProfile K = make_profile(c.profile);
  if (K.support_limit() < c.L) throw ConfigError("profile table does not cover the grid [-L, L]");
}

double target_lambda(const RunConfig& c) {
  return c.lambda_target ? *c.lambda_target : lambda_from_w0(*c.w0_target);
}

ContinuationOptions continuation_options(const RunConfig& c) {
  ContinuationOptions o;
  o.solver = c.solver;
  o.margin_floor = c.solver.margin_floor;
  return o;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_manifest(const RunConfig& c, const std::string& command, const std::vector<std::string>& files) {
  const json cfg = config_to_json(c);
  const Grid g(c.L, c.M);
  json m{{"command", command},
         {"version", LIOUVILLE_VERSION},
         {"config", cfg},
         {"config_hash", io::hex64(io::fnv1a(cfg.dump()))},
         {"grid", {{"L", g.L()}, {"M", g.M()}, {"h", g.h()}, {"hash", io::grid_hash(g)}}},
         {"files", files}};
  io::write_text((fs::path(c.output_dir) / "manifest.json").string(), dump(m));
}

void prepare_output(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

}  // namespace

json default_config_json() { return config_to_json(RunConfig{}); }

RunConfig config_from_json(const json& j) {
  RunConfig c;
  check_keys(j, {"profile", "grid", "solver", "branch", "thresholds", "output_dir", "seed"}, "config");
  if (j.contains("profile")) {
    const json& p = j.at("profile");
    check_keys(p, {"kind", "delta", "c", "table"}, "profile");
    c.profile.kind = get_string(p, "kind", c.profile.kind);
    c.profile.delta = get_double(p, "delta", c.profile.delta);
    c.profile.c = get_double(p, "c", c.profile.c);
    c.profile.table = get_string(p, "table", c.profile.table);
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, {"L", "M"}, "grid");
    c.L = get_double(g, "L", c.L);
    const long long M = get_int(g, "M", c.M);
    if (M < 1 || M > (1ll << 26)) throw ConfigError("grid M out of range");
    c.M = static_cast<int>(M);
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    check_keys(s, {"method", "theta", "tol", "max_iter", "newton_max_iter", "margin_floor"}, "solver");
    c.solver.method = method_from_string(get_string(s, "method", to_string(c.solver.method)));
    c.solver.theta = get_opt_double(s, "theta", c.solver.theta);
    c.solver.tol = get_double(s, "tol", c.solver.tol);
    c.solver.max_iter = static_cast<int>(get_int(s, "max_iter", c.solver.max_iter));
    c.solver.newton_max_iter = static_cast<int>(get_int(s, "newton_max_iter", c.solver.newton_max_iter));
    c.solver.margin_floor = get_double(s, "margin_floor", c.solver.margin_floor);
  }
  if (j.contains("branch")) {
    const json& b = j.at("branch");
    check_keys(b, {"lambda_start", "lambda_target", "w0_target", "steps", "lambda_list"}, "branch");
    c.lambda_start = get_double(b, "lambda_start", c.lambda_start);
    c.w0_target = get_opt_double(b, "w0_target", c.w0_target);
    const bool explicit_lambda = b.contains("lambda_target");
    c.lambda_target = get_opt_double(b, "lambda_target", c.w0_target ? std::nullopt : c.lambda_target);
    if (!explicit_lambda && c.w0_target) c.lambda_target.reset();
    c.steps = static_cast<int>(get_int(b, "steps", c.steps));
    if (b.contains("lambda_list")) {
      const json& l = b.at("lambda_list");
      if (!l.is_array()) throw ConfigError("'lambda_list' must be an array");
      c.lambda_list.clear();
      for (const auto& x : l) {
        if (!x.is_number()) throw ConfigError("'lambda_list' entries must be numbers");
        c.lambda_list.push_back(x.get<double>());
      }
    }
  }
  if (j.contains("thresholds")) {
    const json& t = j.at("thresholds");
    check_keys(t, {"monotone", "bound", "window", "h_sign", "pohozaev", "boundary_budget", "slope", "flatness"},
               "thresholds");
    Thresholds& th = c.thresholds;
    th.monotone = get_double(t, "monotone", th.monotone);
    th.bound = get_double(t, "bound", th.bound);
    th.window = get_double(t, "window", th.window);
    th.h_sign = get_double(t, "h_sign", th.h_sign);
    th.pohozaev = get_double(t, "pohozaev", th.pohozaev);
    th.boundary_budget = get_double(t, "boundary_budget", th.boundary_budget);
    th.slope = get_double(t, "slope", th.slope);
    th.flatness = get_double(t, "flatness", th.flatness);
  }
  c.output_dir = get_string(j, "output_dir", c.output_dir);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  const Thresholds& t = c.thresholds;
  return json{
      {"profile", {{"kind", c.profile.kind}, {"delta", c.profile.delta}, {"c", c.profile.c}, {"table", c.profile.table}}},
      {"grid", {{"L", c.L}, {"M", c.M}}},
      {"solver",
       {{"method", to_string(c.solver.method)},
        {"theta", optional_json(c.solver.theta)},
        {"tol", c.solver.tol},
        {"max_iter", c.solver.max_iter},
        {"newton_max_iter", c.solver.newton_max_iter},
        {"margin_floor", c.solver.margin_floor}}},
      {"branch",
       {{"lambda_start", c.lambda_start},
        {"lambda_target", optional_json(c.lambda_target)},
        {"w0_target", optional_json(c.w0_target)},
        {"steps", c.steps},
        {"lambda_list", c.lambda_list}}},
      {"thresholds",
       {{"monotone", t.monotone},
        {"bound", t.bound},
        {"window", t.window},
        {"h_sign", t.h_sign},
        {"pohozaev", t.pohozaev},
        {"boundary_budget", t.boundary_budget},
        {"slope", t.slope},
        {"flatness", t.flatness}}},
      {"output_dir", c.output_dir},
      {"seed", c.seed}};
}

CurvatureProfile make_profile(const ProfileSpec& p) {
  if (p.kind == "gaussian") return CurvatureProfile::gaussian();
  if (p.kind == "power") return CurvatureProfile::power(p.delta);
  if (p.kind == "constant") return CurvatureProfile::constant(p.c);
  if (p.kind == "tabulated") {
    if (p.table.empty()) throw ConfigError("tabulated profile needs a table file");
    return CurvatureProfile::load_csv(p.table);
  }
  throw ConfigError("unknown profile kind '" + p.kind + "'");
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate(c);
  const CurvatureProfile K = make_profile(c.profile);
  const Grid g(c.L, c.M);
  prepare_output(c.output_dir);
  const fs::path dir(c.output_dir);

  SolveReport rep;
  try {
    rep = c.w0_target ? solve_for_w0(K, g, *c.w0_target, continuation_options(c))
                      : solve(*c.lambda_target, K, g, std::nullopt, c.solver);
  } catch (const NumericalError& e) {
    json failure{{"converged", false}, {"lambda", target_lambda(c)}, {"message", e.what()}};
    io::write_text((dir / "solve_report.json").string(), dump(failure));
    write_manifest(c, "solve", {"solve_report.json"});
    err << "solve failed: " << e.what() << "\n";
    return kNumericalFailure;
  }

  const VerificationReport ver = verify_solution(rep, K, c.thresholds);
  json lin;
  if (rep.converged) {
    LinearizationReport lr = linearize(rep.v, rep.lambda, K, g.M() <= 1024, c.seed);
    lin = io::to_json(lr);
  }
  json report = io::to_json(rep);
  report["linearization"] = lin;
  io::write_text((dir / "solve_report.json").string(), dump(report));
  io::write_field_csv((dir / "v.csv").string(), rep.v);
  io::write_field_csv((dir / "w.csv").string(), rep.w);
  io::write_text((dir / "verification.json").string(), dump(io::to_json(ver)));
  write_manifest(c, "solve", {"solve_report.json", "v.csv", "w.csv", "verification.json"});

  out << "lambda " << io::format_double(rep.lambda) << "  v(0) " << io::format_double(rep.v0) << "  w(0) "
      << io::format_double(rep.w0) << "  Lambda " << io::format_double(rep.Lambda_total) << "\n";
  out << "iterations " << rep.iterations << "  residual_l2 " << io::format_double(rep.residual_l2) << "  converged "
      << (rep.converged ? "yes" : "no") << "\n";
  if (rep.assumption_A_violated) out << "note: K violates Assumption (A); Lambda = 2 pi is the boundary case\n";
  out << format_table(ver);
  if (!rep.converged) {
    err << "solver did not converge: " << rep.message << "\n";
    return kNumericalFailure;
  }
  return ver.overall_pass ? kOk : kNumericalFailure;
}

int cmd_branch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate(c);
  const CurvatureProfile K = make_profile(c.profile);
  const Grid g(c.L, c.M);
  const ContinuationOptions opt = continuation_options(c);
  std::optional<CurvatureMap> map;
  if (c.lambda_list.empty() && target_lambda(c) < c.lambda_start)
    throw ConfigError("lambda target lies below lambda_start");
  prepare_output(c.output_dir);
  const fs::path dir(c.output_dir);

  BranchResult b;
  json extra;
  if (!c.lambda_list.empty()) {
    map = lambda_curvature_map(K, g, c.lambda_list, opt);
    b = map->branch;
    json table = json::array();
    for (std::size_t i = 0; i < map->lambda.size(); ++i) table.push_back({map->lambda[i], map->Lambda[i]});
    extra = json{{"lambda_Lambda", table}, {"strictly_monotone", map->strictly_monotone}};
  } else {
    b = continue_branch(K, g, c.lambda_start, target_lambda(c), c.steps, opt);
  }
  json records = json::array();
  for (const auto& r : b.records) records.push_back(io::to_json(r));
  json summary{{"records", records},
               {"completed", b.completed},
               {"error", b.error},
               {"assumption_A_violated", b.assumption_A_violated}};
  if (b.failed_lambda) summary["failed_lambda"] = *b.failed_lambda;
  if (!extra.is_null()) summary["curvature_map"] = extra;
  io::write_text((dir / "branch.csv").string(), io::branch_csv(b.records));
  io::write_text((dir / "branch.json").string(), dump(summary));
  write_manifest(c, "branch", {"branch.csv", "branch.json"});

  out << io::branch_csv(b.records);
  if (b.assumption_A_violated) out << "note: K violates Assumption (A); Lambda = 2 pi is the boundary case\n";
  if (map) out << "Lambda(lambda) strictly monotone on the sample: " << (map->strictly_monotone ? "yes" : "no") << "\n";
  if (!b.completed) {
    err << "branch aborted: " << b.error << "\n";
    return kNumericalFailure;
  }
  return kOk;
}

int cmd_verify(const RunConfig& c, const std::string& input_dir, std::ostream& out, std::ostream& err) {
  const CurvatureProfile K = make_profile(c.profile);
  const fs::path in(input_dir);
  for (const char* f : {"v.csv", "w.csv"})
    if (!fs::exists(in / f)) throw ConfigError("missing solution file '" + (in / f).string() + "'");
  const Field v = io::read_field_csv((in / "v.csv").string());
  const Field w = io::read_field_csv((in / "w.csv").string());
  if (!(v.grid() == w.grid())) throw ConfigError("v.csv and w.csv live on different grids");
  if (K.support_limit() < v.grid().L()) throw ConfigError("profile table does not cover the stored grid");
  const double lambda = v.at(0) / K.sqrtK(0.0);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    err << "stored v(0) is not positive\n";
    return kNumericalFailure;
  }
  const SolveReport rep = report_from_fields(v, w, lambda, K);
  const VerificationReport ver = verify_solution(rep, K, c.thresholds);
  out << "lambda " << io::format_double(lambda) << "  residual_l2 " << io::format_double(rep.residual_l2) << "\n";
  out << format_table(ver);
  return ver.overall_pass ? kOk : kNumericalFailure;
}

int cmd_selftest(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (c.M < 4) throw ConfigError("selftest needs M >= 4");
  const Grid g(c.L, c.M);
  struct Row {
    std::string name;
    double value, threshold;
  };
  std::vector<Row> rows;

  const Field f = Field::sample(g, [](double x) { return 1.0 / (1.0 + x * x); }, Parity::Even);
  const Field Hf = hilbert(f);
  double e1 = 0.0;
  for (int j = -g.M(); j <= g.M(); ++j) {
    const double x = g.x(j);
    if (std::abs(x) <= 0.5 * g.L()) e1 = std::max(e1, std::abs(Hf.at(j) - x / (1.0 + x * x)));
  }
  rows.push_back({"hilbert_lorentzian", e1, 1e-4});

  const Field psi = Field::sample(g, [](double x) { return 2.0 * x / (x * x + 1.0); }, Parity::Odd);
  const Field pot = Field::sample(g, [](double x) { return 2.0 / (1.0 + x * x); }, Parity::Even);
  // psi ~ 2/x is cut at |x| = L; measured on |x| <= L/2 like the Lorentzian row
  const Field r2 = half_laplacian(psi) - multiply(pot, psi);
  double num = 0.0, den = 0.0;
  for (int j = -g.M(); j <= g.M(); ++j) {
    if (std::abs(g.x(j)) > 0.5 * g.L()) continue;
    num += r2.at(j) * r2.at(j);
    den += psi.at(j) * psi.at(j);
  }
  rows.push_back({"half_laplacian_interior", den > 0.0 ? std::sqrt(num / den) : INFINITY, 1e-3});

  const Grid gh(c.L, std::min(c.M, 1024));
  const Eigen::MatrixXd A = hankel_matrix(gh);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A, Eigen::EigenvaluesOnly).eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  rows.push_back({"hankel_psd", -ev.minCoeff() / scale, 1e-10});

  const CurvatureProfile one = CurvatureProfile::constant(1.0);
  double e4 = 0.0;
  for (double mu : {0.25, 0.5, 1.0, 2.0}) {
    const ExactSoliton s = exact_soliton(mu, g);
    e4 = std::max(e4, l2_norm(residual_F(s.v, s.lambda, one)) / l2_norm(s.v));
  }
  rows.push_back({"exact_soliton_residual", e4, 5e-3});

  bool all = true;
  char line[160];
  std::snprintf(line, sizeof line, "%-26s %14s %14s  %s\n", "check", "value", "threshold", "result");
  out << line;
  for (const auto& r : rows) {
    const bool pass = r.value <= r.threshold;
    all = all && pass;
    std::snprintf(line, sizeof line, "%-26s %14.6e %14.6e  %s\n", r.name.c_str(), r.value, r.threshold,
                  pass ? "pass" : "FAIL");
    out << line;
  }
  out << "grid L=" << io::format_double(g.L()) << " M=" << g.M() << "\noverall: " << (all ? "pass" : "FAIL") << "\n";
  return all ? kOk : kNumericalFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solve and verify the nonlocal Liouville equation (-Delta)^{1/2} w = K e^w on the line"};
  app.name(args.empty() ? "liouville" : args[0]);
  app.require_subcommand(1);
  app.set_version_flag("--version", LIOUVILLE_VERSION);

  struct Flags {
    std::string config, profile, table, method, out, in;
    double delta = 0, constant = 0, lambda = 0, w0 = 0, L = 0, theta = 0, tol = 0, lambda_start = 0;
    int M = 0, max_iter = 0, steps = 0;
    std::uint64_t seed = 0;
    std::vector<double> lambda_list;
  } fl;
  std::map<std::string, CLI::Option*> opts;

  auto add_common = [&](CLI::App* sub) {
    opts["config"] = sub->add_option("--config", fl.config, "JSON config file; flags override its fields");
    opts["profile"] = sub->add_option("--profile", fl.profile, "gaussian | power | constant | tabulated");
    opts["delta"] = sub->add_option("--delta", fl.delta, "decay exponent of the power profile");
    opts["constant"] = sub->add_option("--constant", fl.constant, "value of the constant profile");
    opts["table"] = sub->add_option("--table", fl.table, "two-column CSV (x, K) for the tabulated profile");
    opts["L"] = sub->add_option("--L", fl.L, "grid half-width");
    opts["M"] = sub->add_option("--M", fl.M, "nodes per half-line");
    opts["seed"] = sub->add_option("--seed", fl.seed, "seed for randomized checks");
    opts["out"] = sub->add_option("--out", fl.out, "output directory");
  };
  auto add_solver = [&](CLI::App* sub) {
    auto* l = sub->add_option("--lambda", fl.lambda, "target lambda = v(0)/sqrt(K(0))");
    auto* w = sub->add_option("--w0", fl.w0, "target w(0)");
    l->excludes(w);
    opts["lambda"] = l;
    opts["w0"] = w;
    opts["theta"] = sub->add_option("--theta", fl.theta, "Picard damping in (0, 1]");
    opts["tol"] = sub->add_option("--tol", fl.tol, "L2 residual tolerance");
    opts["max_iter"] = sub->add_option("--max-iter", fl.max_iter, "Picard iteration limit");
    opts["method"] = sub->add_option("--method", fl.method, "picard | newton | hybrid");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve at one lambda (or w0) and verify");
  CLI::App* branch_cmd = app.add_subcommand("branch", "follow the solution branch over a lambda ladder");
  CLI::App* verify_cmd = app.add_subcommand("verify", "re-verify stored v.csv / w.csv");
  CLI::App* selftest_cmd = app.add_subcommand("selftest", "run the transform oracle suite");
  std::map<CLI::App*, std::map<std::string, CLI::Option*>> per_cmd;
  for (CLI::App* sub : {solve_cmd, branch_cmd, verify_cmd, selftest_cmd}) {
    opts.clear();
    add_common(sub);
    if (sub == solve_cmd || sub == branch_cmd) add_solver(sub);
    if (sub == branch_cmd) {
      opts["steps"] = sub->add_option("--steps", fl.steps, "number of ladder intervals");
      opts["lambda_start"] = sub->add_option("--lambda-start", fl.lambda_start, "first rung");
      opts["lambda_list"] = sub->add_option("--lambda-list", fl.lambda_list, "tabulate Lambda at these lambdas");
    }
    if (sub == verify_cmd) opts["in"] = sub->add_option("--in", fl.in, "directory holding v.csv and w.csv")->required();
    per_cmd[sub] = opts;
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << LIOUVILLE_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsageError;
  }

  CLI::App* active = app.get_subcommands().front();
  auto& o = per_cmd[active];
  auto given = [&](const std::string& k) { return o.count(k) && o[k]->count() > 0; };

  try {
    json base = json::object();
    if (given("config")) {
      try {
        base = json::parse(io::read_text(fl.config));
      } catch (const json::exception& e) {
        throw ConfigError("config '" + fl.config + "' is not valid JSON: " + e.what());
      }
    } else if (active == verify_cmd && fs::exists(fs::path(fl.in) / "manifest.json")) {
      try {
        base = json::parse(io::read_text((fs::path(fl.in) / "manifest.json").string())).at("config");
      } catch (const json::exception& e) {
        throw ConfigError(std::string("stored manifest is malformed: ") + e.what());
      }
    }
    RunConfig c = config_from_json(base);
    if (given("profile")) c.profile.kind = fl.profile;
    if (given("delta")) c.profile.delta = fl.delta;
    if (given("constant")) c.profile.c = fl.constant;
    if (given("table")) c.profile.table = fl.table;
    if (given("L")) c.L = fl.L;
    if (given("M")) c.M = fl.M;
    if (given("seed")) c.seed = fl.seed;
    if (given("out")) c.output_dir = fl.out;
    if (given("lambda")) {
      c.lambda_target = fl.lambda;
      c.w0_target.reset();
    }
    if (given("w0")) {
      c.w0_target = fl.w0;
      c.lambda_target.reset();
    }
    if (given("theta")) c.solver.theta = fl.theta;
    if (given("tol")) c.solver.tol = fl.tol;
    if (given("max_iter")) c.solver.max_iter = fl.max_iter;
    if (given("method")) c.solver.method = method_from_string(fl.method);
    if (given("steps")) c.steps = fl.steps;
    if (given("lambda_start")) c.lambda_start = fl.lambda_start;
    if (given("lambda_list")) c.lambda_list = fl.lambda_list;

    if (active == solve_cmd) return cmd_solve(c, out, err);
    if (active == branch_cmd) return cmd_branch(c, out, err);
    if (active == verify_cmd) return cmd_verify(c, fl.in, out, err);
    return cmd_selftest(c, out, err);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ExtrapolationError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace liouville::cli
