// Copyright 2026 The latstat Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "latstat/directions.hpp"
#include "latstat/error.hpp"
#include "latstat_tools/cli.hpp"
#include "latstat_tools/manifest.hpp"
#include "latstat_tools/report.hpp"

namespace latstat::tools {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = LATSTAT_FIXTURE_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(testing::TempDir()) / "latstat_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::vector<double>> read_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

TEST(Cli, MeasureRows) {
  const auto exact = run({"measure", "--window", (kFixtures / "primitive.toml").string()});
  ASSERT_EQ(exact.code, kExitOk) << exact.err;
  EXPECT_NE(exact.out.find("family,level_N,measure_num,measure_den,measure_float"), std::string::npos);
  EXPECT_NE(exact.out.find("primitive,inf,,,0.6079271"), std::string::npos) << exact.out;
  const auto trunc = run({"measure", "--window", (kFixtures / "primitive_235.toml").string()});
  ASSERT_EQ(trunc.code, kExitOk);
  EXPECT_NE(trunc.out.find("primitive,30,16,25,0.64"), std::string::npos) << trunc.out;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, kExitConfig);
  const auto missing = run({"gen", "--config", "/nonexistent/cfg.toml"});
  EXPECT_EQ(missing.code, kExitConfig);
  EXPECT_FALSE(missing.err.empty());
  const auto unknown = run({"gen", "--bogus", "1"});
  EXPECT_EQ(unknown.code, kExitConfig);
  EXPECT_NE(unknown.err.find("--config"), std::string::npos);  // usage text
  EXPECT_EQ(run({"gen", "--config", (kFixtures / "huge.toml").string()}).code, kExitResource);
  EXPECT_EQ(run({"limit-mc", "--mode", "fpl", "--level", "1001", "--samples", "10"}).code, kExitResource);
  EXPECT_EQ(run({"limit-mc", "--mode", "fpl", "--level", "30", "--shift", "1/2"}).code, kExitConfig);
  EXPECT_EQ(run({"--version"}).code, kExitOk);
}

TEST(Cli, GenWritesManifest) {
  const auto csv = scratch("gen.csv");
  const auto r = run({"gen", "--config", (kFixtures / "visible_T200.toml").string(), "--out", csv.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const fs::path manifest = csv.string() + ".manifest.json";
  ASSERT_TRUE(fs::exists(manifest));
  EXPECT_TRUE(verify_manifest(manifest));
  const auto j = nlohmann::json::parse(slurp(manifest));
  EXPECT_EQ(j["subcommand"], "gen");
  EXPECT_EQ(j["outputs"][0]["sha256"], sha256_file(csv));
  const auto rows = read_csv(slurp(csv));
  EXPECT_EQ(rows.size(), j["parameters"]["count"].get<std::size_t>());
  // Tampering breaks the digest.
  std::ofstream(csv, std::ios::app) << "0,0\n";
  EXPECT_FALSE(verify_manifest(manifest));
}

TEST(Cli, OutputsIndependentOfJobs) {
  const std::vector<std::vector<std::string>> commands{
      {"gaps", "--config", (kFixtures / "halfshift_T300.toml").string()},
      {"dirs", "--config", (kFixtures / "visible_T200.toml").string(), "--draws", "2000"},
      {"fpl", "--config", (kFixtures / "fpl_visible.toml").string(), "--rho", "0.05", "--dirs", "500"},
      {"limit-mc", "--mode", "dir", "--level", "30", "--samples", "3000", "--shift", "1/2,1/2"},
  };
  int k = 0;
  for (const auto& base : commands) {
    std::string bytes[2];
    for (int i = 0; i < 2; ++i) {
      const auto csv = scratch("jobs" + std::to_string(k) + "_" + std::to_string(i) + ".csv");
      auto args = base;
      args.insert(args.end(), {"--seed", "7", "--jobs", i ? "8" : "1", "--out", csv.string()});
      const auto r = run(args);
      ASSERT_EQ(r.code, kExitOk) << base[0] << ": " << r.err;
      bytes[i] = slurp(csv);
    }
    EXPECT_FALSE(bytes[0].empty());
    EXPECT_EQ(bytes[0], bytes[1]) << base[0];
    ++k;
  }
}

TEST(Cli, SiegelCheckPrintsRows) {
  const auto r = run({"siegel-check", "--level", "6", "--samples", "500", "--boxes", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("region,expected,empirical,stderr,zscore\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 2 * 3);
}

TEST(Svg, StepAtOneIsOneVerticalSegment) {
  DirectionSample s;
  for (int i = 0; i < 1024; ++i) s.angles.push_back(i / 1024.0);
  const auto gaps = gap_distribution(s);
  const auto svg = emit_svg(gaps, {PlotKind::kCdf, "step", "gap", "cdf", 5.0, 0.1});
  const auto start = svg.find("d=\"M");
  ASSERT_NE(start, std::string::npos);
  const auto path = svg.substr(start, svg.find('"', start + 3) - start);
  EXPECT_EQ(std::count(path.begin(), path.end(), 'V'), 1) << path;
  EXPECT_NE(svg.find("viewBox=\"0 0 800 600\""), std::string::npos);
  EXPECT_EQ(svg, emit_svg(gaps, {PlotKind::kCdf, "step", "gap", "cdf", 5.0, 0.1}));
}

TEST(Svg, EmptyDistributionIsRejected) {
  EXPECT_THROW(emit_svg(EmpiricalDistribution::from_sample({}), {}), ConfigError);
}

TEST(Svg, FixedAxisTicks) {
  const auto svg = emit_svg(EmpiricalDistribution::from_sample({0.5, 1.0, 1.5, 7.0}), {});
  for (int t = 0; t <= 5; ++t) {
    EXPECT_NE(svg.find("\">" + std::to_string(t) + "</text>"), std::string::npos) << t;
  }
  EXPECT_EQ(svg.find("\">6</text>"), std::string::npos);
}

TEST(Csv, RoundTripPrecision) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_number(1.0 / 3)), 1.0 / 3);
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  CsvTable t({"a", "b"});
  t.add_numbers({1, 2.5});
  EXPECT_EQ(t.str(), "a,b\n1,2.5\n");
}

TEST(Figure, HalfShiftGapsMatchGoldenFixture) {
  const auto csv = scratch("gaps_T500.csv");
  const auto r = run({"reproduce-figure", "--figure", "gaps-halfshift", "--T", "500", "--out", csv.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(scratch("gaps_T500.svg")));
  const auto golden = read_csv(slurp(kFixtures / "gaps_halfshift_T500.csv"));
  const auto fresh = read_csv(slurp(csv));
  ASSERT_EQ(golden.size(), fresh.size());
  ASSERT_GT(golden.size(), 100u);
  for (std::size_t i = 0; i < golden.size(); ++i) {
    EXPECT_EQ(golden[i][0], fresh[i][0]);
    EXPECT_NEAR(golden[i][1], fresh[i][1], 1e-12) << golden[i][0];
  }
  // A larger disc gives nearly the same curve.
  const auto big = scratch("gaps_T800.csv");
  ASSERT_EQ(run({"reproduce-figure", "--figure", "gaps-halfshift", "--T", "800", "--out", big.string()}).code,
            kExitOk);
  const auto wide = read_csv(slurp(big));
  ASSERT_EQ(wide.size(), golden.size());
  double sup = 0;
  for (std::size_t i = 0; i < golden.size(); ++i) sup = std::max(sup, std::abs(wide[i][1] - golden[i][1]));
  EXPECT_LE(sup, 0.02);
}

}  // namespace
}  // namespace latstat::tools
