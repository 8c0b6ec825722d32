#pragma once

// Serialization: field CSV/JSON, report JSON, branch CSV, binary matrix dumps.

#include <Eigen/Dense>

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "liouville/continuation.hpp"
#include "liouville/diagnostics.hpp"

namespace liouville::io {

using json = nlohmann::json;

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
  if (b < e && *b == '+') ++b;
  double x = 0.0;
  const auto res = std::from_chars(b, e, x);
  if (res.ec != std::errc() || res.ptr != e) throw ConfigError("cannot parse number '" + s + "'");
  return x;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string grid_hash(const Grid& g) {
  return hex64(fnv1a(format_double(g.L()) + ":" + std::to_string(g.M())));
}

// ---- fields ----

inline std::string field_csv(const Field& f) {
  std::string s = "x,value\n";
  const Grid& g = f.grid();
  for (int j = -g.M(); j <= g.M(); ++j) s += format_double(g.x(j)) + "," + format_double(f.at(j)) + "\n";
  return s;
}

inline void write_field_csv(const std::string& path, const Field& f) { write_text(path, field_csv(f)); }

/// Reads an "x,value" CSV written by write_field_csv. The grid is recovered from
/// the node count and last node; the field is tagged even when its samples are.
inline Field read_field_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::vector<double> xs, vs;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("x,", 0) == 0) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("malformed CSV row '" + line + "' in " + path);
    xs.push_back(parse_double(line.substr(0, comma)));
    vs.push_back(parse_double(line.substr(comma + 1)));
  }
  if (xs.size() < 3 || xs.size() % 2 == 0) throw ConfigError("CSV " + path + " does not hold a symmetric grid");
  const int M = static_cast<int>(xs.size() / 2);
  const Grid g(xs.back(), M);
  for (int j = -M; j <= M; ++j)
    if (std::abs(xs[g.index(j)] - g.x(j)) > 1e-9 * g.L()) throw ConfigError("CSV " + path + " nodes are not uniform");
  bool even = true;
  for (int j = 1; j <= M; ++j) even = even && vs[g.index(j)] == vs[g.index(-j)];
  return Field(g, std::move(vs), even ? Parity::Even : Parity::None);
}

inline json field_to_json(const Field& f) {
  return json{{"grid", {{"L", f.grid().L()}, {"M", f.grid().M()}}},
              {"parity", to_string(f.parity())},
              {"values", f.values()}};
}

inline Field field_from_json(const json& j) {
  try {
    const Grid g(j.at("grid").at("L").get<double>(), j.at("grid").at("M").get<int>());
    return Field(g, j.at("values").get<std::vector<double>>(), parity_from_string(j.at("parity").get<std::string>()));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed field JSON: ") + e.what());
  }
}

// ---- reports ----

inline json to_json(const SolveReport& r) {
  return json{{"lambda", r.lambda},
              {"v0", r.v0},
              {"w0", r.w0},
              {"Lambda_total", r.Lambda_total},
              {"iterations", r.iterations},
              {"newton_steps", r.newton_steps},
              {"residual_l2", r.residual_l2},
              {"residual_x", r.residual_x},
              {"converged", r.converged},
              {"contraction_estimate", r.contraction_estimate},
              {"assumption_A_violated", r.assumption_A_violated},
              {"method", r.method},
              {"message", r.message},
              {"grid", {{"L", r.v.grid().L()}, {"M", r.v.grid().M()}}}};
}

inline json to_json(const LinearizationReport& r) {
  return json{{"nondegeneracy_margin", r.nondegeneracy_margin},
              {"mono_margin", r.mono_margin},
              {"fd_consistency", r.fd_consistency},
              {"kk_norm", r.kk_norm},
              {"lanczos_iterations", r.lanczos_iterations},
              {"grid", {{"L", r.grid.L()}, {"M", r.grid.M()}}}};
}

inline json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e{{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}, {"required", c.required}};
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  return json{{"checks", checks}, {"overall_pass", r.overall_pass}};
}

inline json to_json(const BranchRecord& b) {
  return json{{"lambda", b.lambda},
              {"v0", b.v0},
              {"w0", b.w0},
              {"Lambda", b.Lambda_total},
              {"residual_l2", b.residual_l2},
              {"margin", b.nondegeneracy_margin},
              {"iterations", b.iterations},
              {"converged", b.converged}};
}

inline std::string branch_csv(const std::vector<BranchRecord>& records) {
  std::string s = "lambda,v0,w0,Lambda,residual_l2,margin,iterations\n";
  for (const auto& b : records)
    s += format_double(b.lambda) + "," + format_double(b.v0) + "," + format_double(b.w0) + "," +
         format_double(b.Lambda_total) + "," + format_double(b.residual_l2) + "," +
         format_double(b.nondegeneracy_margin) + "," + std::to_string(b.iterations) + "\n";
  return s;
}

// ---- dense matrices ----

inline constexpr char kMatrixMagic[8] = {'L', 'I', 'O', 'U', 'M', 'A', 'T', '1'};

/// Header "LIOUMAT1", uint64 rows, uint64 cols (little-endian host order), then row-major doubles.
inline void write_matrix_binary(const std::string& path, const Eigen::MatrixXd& A) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  const std::uint64_t r = static_cast<std::uint64_t>(A.rows()), c = static_cast<std::uint64_t>(A.cols());
  out.write(kMatrixMagic, 8);
  out.write(reinterpret_cast<const char*>(&r), 8);
  out.write(reinterpret_cast<const char*>(&c), 8);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = A;
  out.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * rm.size()));
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

inline Eigen::MatrixXd read_matrix_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  char magic[8];
  std::uint64_t r = 0, c = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&r), 8);
  in.read(reinterpret_cast<char*>(&c), 8);
  if (!in || std::memcmp(magic, kMatrixMagic, 8) != 0) throw ConfigError("'" + path + "' is not a matrix dump");
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(static_cast<Eigen::Index>(r),
                                                                          static_cast<Eigen::Index>(c));
  in.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * rm.size()));
  if (!in) throw ConfigError("'" + path + "' is truncated");
  return rm;
}

}  // namespace liouville::io
