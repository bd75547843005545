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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "latstat/error.hpp"
#include "latstat/pointset.hpp"
#include "latstat/rng.hpp"

namespace latstat {
namespace {

const double kInvZeta2 = 6 / (std::numbers::pi * std::numbers::pi);

PointConfig visible(double T, double c = 0.0) {
  PointConfig cfg;
  cfg.window = CongruenceWindow::exact(FamilySpec::primitive(2));
  cfg.T = T;
  cfg.c = c;
  return cfg;
}

// Direct double loop with gcd, independent of the library's scanner.
std::uint64_t sieve_visible(double T) {
  const auto R = static_cast<std::int64_t>(std::ceil(T));
  std::uint64_t n = 0;
  for (std::int64_t x = -R; x <= R; ++x) {
    for (std::int64_t y = -R; y <= R; ++y) {
      if (std::gcd(x, y) == 1 && static_cast<double>(x * x + y * y) < T * T) ++n;
    }
  }
  return n;
}

TEST(Enumerate, VisiblePointsRadius1p5) {
  const auto b = enumerate(visible(1.5));
  ASSERT_EQ(b.count, 8u);
  std::set<std::pair<long, long>> got;
  for (std::size_t i = 0; i < b.count; ++i) got.insert({std::lround(b.point(i)[0]), std::lround(b.point(i)[1])});
  const std::set<std::pair<long, long>> expect{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  EXPECT_EQ(got, expect);
}

TEST(Enumerate, VisibleDensityAt500MatchesSieve) {
  const auto cfg = visible(500);
  const auto n = count_points(cfg);
  EXPECT_EQ(n, sieve_visible(500));
  const double ratio = static_cast<double>(n) / (std::numbers::pi * 500 * 500);
  EXPECT_NEAR(ratio, kInvZeta2, 0.01 * kInvZeta2);
}

TEST(Enumerate, ThinAnnulusMayBeEmpty) {
  const auto b = enumerate(visible(1.2, 0.999999));
  EXPECT_EQ(b.count, 0u);
  EXPECT_TRUE(b.coords.empty());
}

TEST(Enumerate, PointsLieInAnnulus) {
  PointConfig cfg = visible(60, 0.4);
  cfg.alpha = Shift::parse({"sqrt2", "sqrt3"});
  const auto b = enumerate(cfg);
  ASSERT_GT(b.count, 0u);
  EXPECT_EQ(b.coords.size(), b.count * 2);
  for (std::size_t i = 0; i < b.count; ++i) {
    const double r = std::hypot(b.point(i)[0], b.point(i)[1]);
    EXPECT_GE(r, 0.4 * 60 - 1e-12 * 60);
    EXPECT_LE(r, 60 + 1e-12 * 60);
  }
}

TEST(Enumerate, RefusesHugeRequests) {
  EXPECT_THROW(enumerate(visible(1e5)), ResourceLimitError);
}

TEST(Enumerate, OriginExcludedOnlyWhenPresent) {
  PointConfig cfg;
  cfg.window = CongruenceWindow::trivial(2);
  cfg.T = 1.5;
  EXPECT_EQ(count_points(cfg), 8u);
  cfg.exclude_origin = false;
  EXPECT_EQ(count_points(cfg), 9u);
  cfg.exclude_origin = true;
  cfg.alpha = Shift::parse({"1", "0"});
  // (-1, 0) + (1, 0) is the origin.
  EXPECT_EQ(count_points(cfg), 8u);
}

TEST(DensityRatio, VisibleSweep) {
  const auto rows = density_ratio(visible(1), {100, 200, 400});
  ASSERT_EQ(rows.size(), 3u);
  const double tol[] = {0.03, 0.02, 0.01};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(rows[i].ratio, kInvZeta2, tol[i] * kInvZeta2) << rows[i].T;
    EXPECT_EQ(rows[i].count, sieve_visible(rows[i].T));
  }
}

TEST(DensityRatio, TrivialWindowGaussCircle) {
  PointConfig cfg;
  cfg.window = CongruenceWindow::trivial(2);
  const auto rows = density_ratio(cfg, {200});
  EXPECT_NEAR(rows[0].ratio, 1.0, 0.01);
}

TEST(DensityRatio, SquarefreeBothCoordinates) {
  PointConfig cfg;
  cfg.window = CongruenceWindow::exact(FamilySpec::kfree({2, 2}));
  const auto rows = density_ratio(cfg, {400});
  EXPECT_NEAR(rows[0].ratio, kInvZeta2 * kInvZeta2, 0.02 * kInvZeta2 * kInvZeta2);
}

TEST(TruncationExcess, Primitive235) {
  PointConfig t = visible(200);
  t.window = CongruenceWindow::truncated(FamilySpec::primitive(2), {2, 3, 5});
  const auto e = truncation_excess(visible(200), t, 200);
  EXPECT_LE(e.excess_density, 0.05);
  EXPECT_GT(e.excess_count, 0u);
  EXPECT_EQ(e.exact_count + e.excess_count, e.truncated_count);
}

TEST(TruncationExcess, IdenticalAndS2) {
  EXPECT_EQ(truncation_excess(visible(100), visible(100), 100).excess_count, 0u);
  PointConfig t = visible(200);
  t.window = CongruenceWindow::truncated(FamilySpec::primitive(2), {2});
  const auto e = truncation_excess(visible(200), t, 200);
  EXPECT_LE(e.excess_density, 0.2);
  EXPECT_GE(e.excess_density, 0.05);
}

TEST(TruncationExcess, RejectsNonNestedWindows) {
  PointConfig a = visible(50), b = visible(50);
  a.window = CongruenceWindow::truncated(FamilySpec::kfree({2, 2}), {2});
  b.window = CongruenceWindow::truncated(FamilySpec::primitive(2), {3});
  EXPECT_THROW(truncation_excess(a, b, 50), ConfigError);
}

TEST(Sandwich, ExactSubsetOfTruncated) {
  PointConfig exact = visible(120);
  exact.alpha = Shift::parse({"1/3", "-1/2"});
  PointConfig trunc = exact;
  trunc.window = epsilon_truncate(FamilySpec::primitive(2), 0.05);
  const auto a = enumerate(exact), b = enumerate(trunc);
  std::set<std::pair<double, double>> big;
  for (std::size_t i = 0; i < b.count; ++i) big.insert({b.point(i)[0], b.point(i)[1]});
  for (std::size_t i = 0; i < a.count; ++i) EXPECT_TRUE(big.count({a.point(i)[0], a.point(i)[1]}));
}

TEST(ShiftEquivariance, RandomConfigs) {
  CounterRng rng(stream_key(21, "pointset.equivariance"), 0);
  for (int trial = 0; trial < 6; ++trial) {
    const double T = 30 + 20 * rng.uniform();
    const double c = 0.5 * rng.uniform();
    const auto a1 = Fraction::make(static_cast<std::int64_t>(rng.below(13)) - 6, 1 + rng.below(5));
    const auto a2 = Fraction::make(static_cast<std::int64_t>(rng.below(13)) - 6, 1 + rng.below(5));
    PointConfig shifted = visible(T, c);
    shifted.alpha = Shift::rational({a1, a2});
    PointConfig base = visible(T + 10, 0.0);
    const auto s = enumerate(shifted);
    const auto b = enumerate(base);
    std::set<std::pair<long double, long double>> expect;
    for (std::size_t i = 0; i < b.count; ++i) {
      const long double x = b.point(i)[0] + a1.value(), y = b.point(i)[1] + a2.value();
      const long double r = std::sqrt(x * x + y * y);
      if (r >= c * T && r < T) expect.insert({x, y});
    }
    std::set<std::pair<long double, long double>> got;
    for (std::size_t i = 0; i < s.count; ++i) got.insert({s.point(i)[0], s.point(i)[1]});
    // Compare after rounding to the common denominator grid.
    auto snap = [](const std::set<std::pair<long double, long double>>& in) {
      std::set<std::pair<long long, long long>> out;
      for (auto [x, y] : in) out.insert({std::llroundl(x * 3600), std::llroundl(y * 3600)});
      return out;
    };
    EXPECT_EQ(snap(got), snap(expect)) << "trial " << trial;
  }
}

TEST(Determinism, IrrationalShiftBitwise) {
  PointConfig cfg = visible(80, 0.1);
  cfg.alpha = Shift::parse({"sqrt2", "pi"});
  const auto a = enumerate(cfg, 1);
  const auto b = enumerate(cfg, 4);
  EXPECT_EQ(a.coords, b.coords);
  EXPECT_EQ(a.config_hash, b.config_hash);
  EXPECT_EQ(a.config_hash, cfg.hash());
}

TEST(Symmetry, VisiblePointsCentrallySymmetric) {
  const auto b = enumerate(visible(70));
  std::set<std::pair<long, long>> pts;
  for (std::size_t i = 0; i < b.count; ++i) pts.insert({std::lround(b.point(i)[0]), std::lround(b.point(i)[1])});
  for (auto [x, y] : pts) EXPECT_TRUE(pts.count({-x, -y}));
}

TEST(Basis, WindowAppliesToCoordinatesInBasis) {
  // B = [[1, 1], [0, 1]]: x = m B, m = x B^{-1}. The trivial window gives Z^2
  // back; a non-symmetric window distinguishes m from x.
  PointConfig cfg;
  cfg.T = 6;
  cfg.basis = {1, 1, 0, 1};
  cfg.window = CongruenceWindow::custom(2, {LocalCondition::explicit_residues(2, 1, 2, {{1, 0}})});
  const auto b = enumerate(cfg);
  ASSERT_GT(b.count, 0u);
  for (std::size_t i = 0; i < b.count; ++i) {
    const long x1 = std::lround(b.point(i)[0]), x2 = std::lround(b.point(i)[1]);
    // m = (x1, x2 - x1) must be (odd, even).
    EXPECT_EQ(((x1 % 2) + 2) % 2, 1);
    EXPECT_EQ((((x2 - x1) % 2) + 2) % 2, 0);
  }
  cfg.basis = {2, 0, 0, 1};
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(PointConfig, Validation) {
  PointConfig cfg = visible(10);
  cfg.c = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = visible(-1);
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = visible(10);
  cfg.alpha = Shift::parse({"1/2"});
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Shift, ParseRationalAndIrrational) {
  const auto r = Shift::parse({"1/2", "-3"});
  EXPECT_TRUE(r.is_rational());
  EXPECT_EQ(r.common_denominator(), 2);
  const auto i = Shift::parse({"sqrt2", "1/3"});
  EXPECT_FALSE(i.is_rational());
  EXPECT_NEAR(static_cast<double>(i.values()[0]), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(static_cast<double>(Shift::parse({"golden"}).values()[0]), (1 + std::sqrt(5.0)) / 2, 1e-15);
  EXPECT_NEAR(static_cast<double>(Shift::parse({"irrational:0.123456789"}).values()[0]), 0.123456789, 1e-15);
  EXPECT_THROW(Shift::parse({"sqrt"}), ConfigError);
}

}  // namespace
}  // namespace latstat
