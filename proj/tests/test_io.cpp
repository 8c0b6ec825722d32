#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "liouville/diagnostics.hpp"
#include "liouville/io.hpp"

using namespace liouville;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("liouville_io_" + name);
  fs::create_directories(d);
  return d;
}
}  // namespace

TEST(Io, FormatParseRoundTripIsExact) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> bits;
  int tested = 0;
  while (tested < 2000) {
    const std::uint64_t b = bits(rng);
    double x;
    std::memcpy(&x, &b, 8);
    if (!std::isfinite(x)) continue;
    ++tested;
    const double y = io::parse_double(io::format_double(x));
    EXPECT_EQ(std::memcmp(&x, &y, 8), 0) << io::format_double(x);
  }
  EXPECT_THROW(io::parse_double("1.0abc"), ConfigError);
}

TEST(Io, FieldCsvAndJsonRoundTrip) {
  const Grid g(40.0, 256);
  const Field f = Field::sample(g, [](double x) { return std::exp(-x * x) / 3.0; }, Parity::Even);
  const auto path = (scratch("csv") / "f.csv").string();
  io::write_field_csv(path, f);
  const Field back = io::read_field_csv(path);
  EXPECT_EQ(back.grid(), g);
  EXPECT_EQ(back.values(), f.values());
  EXPECT_EQ(back.parity(), Parity::Even);

  const Field j = io::field_from_json(io::json::parse(io::field_to_json(f).dump()));
  EXPECT_EQ(j.values(), f.values());
  EXPECT_EQ(j.parity(), Parity::Even);
  EXPECT_THROW(io::field_from_json(io::json{{"grid", 1}}), ConfigError);
}

TEST(Io, MalformedCsvIsRejected) {
  const auto dir = scratch("bad");
  io::write_text((dir / "a.csv").string(), "x,value\n0,1\n1,2\n");
  EXPECT_THROW(io::read_field_csv((dir / "a.csv").string()), ConfigError);
  io::write_text((dir / "b.csv").string(), "x,value\n-1,1\n0;2\n1,1\n");
  EXPECT_THROW(io::read_field_csv((dir / "b.csv").string()), ConfigError);
  EXPECT_THROW(io::read_field_csv((dir / "missing.csv").string()), ConfigError);
}

TEST(Io, MatrixDumpRoundTrip) {
  const auto dir = scratch("mat");
  const Eigen::MatrixXd A = Eigen::MatrixXd::Random(7, 5);
  io::write_matrix_binary((dir / "A.bin").string(), A);
  EXPECT_EQ(io::read_matrix_binary((dir / "A.bin").string()), A);
  io::write_text((dir / "junk.bin").string(), "NOTAMATRIX0000000000000000");
  EXPECT_THROW(io::read_matrix_binary((dir / "junk.bin").string()), ConfigError);
}

TEST(Io, ReportKeys) {
  const Grid g(40.0, 512);
  const auto K = CurvatureProfile::gaussian();
  const auto r = solve(0.5, K, g);
  const auto j = io::to_json(r);
  for (const char* k : {"lambda", "v0", "w0", "Lambda_total", "iterations", "residual_l2", "converged", "method", "grid"})
    EXPECT_TRUE(j.contains(k)) << k;
  const auto v = io::to_json(verify_solution(r, K));
  ASSERT_TRUE(v.contains("checks"));
  EXPECT_TRUE(v.at("overall_pass").get<bool>());
  EXPECT_EQ(io::branch_csv({}), "lambda,v0,w0,Lambda,residual_l2,margin,iterations\n");
}

TEST(Io, HashVectors) {
  EXPECT_EQ(io::hex64(io::fnv1a("")), "cbf29ce484222325");
  EXPECT_EQ(io::hex64(io::fnv1a("a")), "af63dc4c8601ec8c");
  EXPECT_EQ(io::grid_hash(Grid(40.0, 4096)), io::grid_hash(Grid(40.0, 4096)));
  EXPECT_NE(io::grid_hash(Grid(40.0, 4096)), io::grid_hash(Grid(40.0, 2048)));
}
