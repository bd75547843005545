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
#include <limits>
#include <numbers>
#include <set>

#include "latstat/error.hpp"
#include "latstat/lorentz.hpp"
#include "latstat/rng.hpp"

namespace latstat {
namespace {

using Pos = std::vector<std::int64_t>;

PointConfig visible() {
  PointConfig cfg;
  cfg.window = CongruenceWindow::exact(FamilySpec::primitive(2));
  return cfg;
}

std::vector<PointConfig> oracle_configs() {
  std::vector<PointConfig> out;
  out.push_back(visible());
  PointConfig irr = visible();
  irr.alpha = Shift::parse({"sqrt2", "sqrt3"});
  out.push_back(irr);
  PointConfig lattice;  // Z^2 minus the origin
  lattice.window = CongruenceWindow::trivial(2);
  out.push_back(lattice);
  PointConfig shifted;
  shifted.window = CongruenceWindow::truncated(FamilySpec::kfree({2, 2}), {2, 3});
  shifted.alpha = Shift::parse({"1/3", "1/2"});
  out.push_back(shifted);
  return out;
}

bool in_set(const PointConfig& cfg, const Pos& x) {
  if (cfg.exclude_origin && cfg.alpha.is_rational()) {
    bool origin = true;
    for (std::size_t i = 0; i < x.size(); ++i) origin &= x[i] + cfg.alpha.exact()[i].value() == 0;
    if (origin) return false;
  }
  return cfg.window.contains(x);
}

struct OracleHit {
  bool hit = false;
  long double tau = 0;
  Pos position;
};

// Scan every set point in the ball of radius t_max + rho around q.
OracleHit brute_force(const PointConfig& cfg, double rho, const double* q, const double* v, double t_max,
                      bool* inside) {
  const auto& a = cfg.alpha.values();
  const long double R = t_max + rho + 1;
  const long double rho2 = static_cast<long double>(rho) * rho;
  OracleHit best;
  *inside = false;
  for (auto x0 = static_cast<std::int64_t>(std::floor(q[0] - a[0] - R)); x0 <= q[0] - a[0] + R; ++x0) {
    for (auto x1 = static_cast<std::int64_t>(std::floor(q[1] - a[1] - R)); x1 <= q[1] - a[1] + R; ++x1) {
      const Pos x{x0, x1};
      if (!in_set(cfg, x)) continue;
      const long double d0 = (x0 + a[0]) - q[0], d1 = (x1 + a[1]) - q[1];
      if (d0 * d0 + d1 * d1 < rho2) *inside = true;
      const long double s = d0 * v[0] + d1 * v[1];
      const long double e0 = d0 - s * v[0], e1 = d1 - s * v[1];
      const long double h2 = e0 * e0 + e1 * e1;
      if (h2 > rho2 || !(s > 0)) continue;
      const long double t = s - std::sqrt(rho2 - h2);
      if (!(t > 0) || t > t_max) continue;
      if (!best.hit || t < best.tau || (t == best.tau && x < best.position)) best = {true, t, x};
    }
  }
  return best;
}

TEST(FreePath, AxisHitFromExcludedCentre) {
  const double q[] = {0, 0}, v[] = {1, 0};
  const ScattererField field(visible(), 0.1, q);
  ASSERT_FALSE(field.excluded().has_value());  // the origin is not a visible point
  const auto r = free_path(field, q, v, 10);
  ASSERT_TRUE(r.hit);
  EXPECT_NEAR(r.tau, 0.9, 1e-15);
  EXPECT_EQ(r.hit_point, (Pos{1, 0}));
  const double q2[] = {1, 0};
  const ScattererField own(visible(), 0.1, q2);
  ASSERT_TRUE(own.excluded().has_value());
  EXPECT_EQ(*own.excluded(), (Pos{1, 0}));
  // (k, 0) is invisible for k > 1, so the ray along the axis escapes; the
  // column (1, k) is visible throughout.
  EXPECT_TRUE(free_path(own, q2, v, 10).censored());
  const double up[] = {0, 1};
  const auto r2 = free_path(own, q2, up, 10);
  EXPECT_EQ(r2.hit_position, (Pos{1, 1}));
  EXPECT_NEAR(r2.tau, 0.9, 1e-15);
}

TEST(FreePath, ChannelIsCensored) {
  const double q[] = {0.3, 0.5}, v[] = {1, 0};
  const ScattererField field(visible(), 0.1, q);
  for (double t_max : {1.0, 100.0, 1e5}) {
    const auto r = free_path(field, q, v, t_max);
    EXPECT_TRUE(r.censored());
    EXPECT_EQ(r.tau, t_max);
  }
  EXPECT_TRUE(ray_enumerate(field, q, v, 1000).empty());
}

TEST(FreePath, TangentialHit) {
  const double q[] = {0, 0.125}, v[] = {1, 0};
  const ScattererField field(visible(), 0.125, q);
  const auto r = free_path(field, q, v, 10);
  ASSERT_TRUE(r.hit);
  EXPECT_EQ(r.tau, 1.0);
  EXPECT_EQ(r.hit_position, (Pos{1, 0}));
}

TEST(FreePath, InsideScattererIsAnError) {
  const double q[] = {1.05, 0.02}, v[] = {1, 0};
  const ScattererField field(visible(), 0.1, q);
  try {
    free_path(field, q, v, 10);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("initial point inside scatterer"), std::string::npos);
  }
}

TEST(FreePath, BoundaryStartCountsAsOutside) {
  const double q[] = {1, 1.125}, v[] = {0, 1};
  const ScattererField field(visible(), 0.125, q);
  const auto r = free_path(field, q, v, 10);
  ASSERT_TRUE(r.hit);
  EXPECT_EQ(r.hit_position, (Pos{1, 2}));
  EXPECT_EQ(r.tau, 0.75);
}

TEST(FreePath, HitLiesOnTheSphere) {
  PointConfig cfg = visible();
  cfg.alpha = Shift::parse({"sqrt2", "sqrt3"});
  const double q[] = {0.1, 0.2};
  const ScattererField field(cfg, 0.05, q);
  CounterRng rng(stream_key(3, "lorentz.sphere"), 0);
  for (int i = 0; i < 200; ++i) {
    const double th = rng.uniform(0, 2 * std::numbers::pi);
    const double v[] = {std::cos(th), std::sin(th)};
    const auto r = free_path(field, q, v, 200);
    if (!r.hit) continue;
    const double cx = r.hit_position[0] + std::sqrt(2.0), cy = r.hit_position[1] + std::sqrt(3.0);
    EXPECT_NEAR(std::hypot(q[0] + r.tau * v[0] - cx, q[1] + r.tau * v[1] - cy), 0.05, 1e-10);
    EXPECT_GT(r.tau, 0);
  }
}

TEST(FreePath, AgreesWithBruteForce) {
  const auto configs = oracle_configs();
  CounterRng rng(stream_key(17, "lorentz.oracle"), 0);
  int mismatches = 0, hits = 0, inside_cases = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto& cfg = configs[i % configs.size()];
    const double rho = rng.uniform(0.01, 0.3);
    const double q[] = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double th = rng.uniform(0, 2 * std::numbers::pi);
    const double v[] = {std::cos(th), std::sin(th)};
    const double t_max = 50;
    bool inside = false;
    const auto expect = brute_force(cfg, rho, q, v, t_max, &inside);
    const ScattererField field(cfg, rho, q);
    if (inside) {
      ++inside_cases;
      EXPECT_THROW(free_path(field, q, v, t_max), ConfigError);
      continue;
    }
    const auto got = free_path(field, q, v, t_max);
    const bool same = got.hit == expect.hit &&
                      (!got.hit || (got.hit_position == expect.position &&
                                    got.tau == static_cast<double>(expect.tau)));
    mismatches += !same;
    hits += got.hit;
  }
  EXPECT_EQ(mismatches, 0);
  EXPECT_GT(hits, 500);
  EXPECT_GT(inside_cases, 0);
}

TEST(RayEnumerate, AxisCandidates) {
  PointConfig lattice;
  lattice.window = CongruenceWindow::trivial(2);
  const double q[] = {0, 0}, v[] = {1, 0};
  const ScattererField field(lattice, 0.1, q);
  const auto c = ray_enumerate(field, q, v, 5);
  ASSERT_EQ(c.size(), 5u);
  for (int k = 0; k < 5; ++k) {
    EXPECT_EQ(c[k].position, (Pos{k + 1, 0}));
    EXPECT_EQ(c[k].along, k + 1);
  }
}

TEST(RayEnumerate, MatchesBoundingBoxFilter) {
  const auto configs = oracle_configs();
  CounterRng rng(stream_key(19, "lorentz.candidates"), 0);
  for (int i = 0; i < 100; ++i) {
    const auto& cfg = configs[i % configs.size()];
    const double rho = rng.uniform(0.01, 0.45);
    const double q[] = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double th = rng.uniform(0, 2 * std::numbers::pi);
    const double v[] = {std::cos(th), std::sin(th)};
    const double t_max = rng.uniform(1, 40);
    const ScattererField field(cfg, rho, q);
    std::set<Pos> got;
    long double last = -1;
    for (const auto& c : ray_enumerate(field, q, v, t_max)) {
      EXPECT_GE(c.along, last);
      last = c.along;
      got.insert(c.position);
    }
    std::set<Pos> expect;
    const auto& a = cfg.alpha.values();
    for (std::int64_t x0 = -50; x0 <= 50; ++x0) {
      for (std::int64_t x1 = -50; x1 <= 50; ++x1) {
        if (!in_set(cfg, {x0, x1})) continue;
        const long double d0 = (x0 + a[0]) - q[0], d1 = (x1 + a[1]) - q[1];
        const long double s = d0 * v[0] + d1 * v[1];
        const long double e0 = d0 - s * v[0], e1 = d1 - s * v[1];
        if (s > 0 && s <= t_max && e0 * e0 + e1 * e1 <= static_cast<long double>(rho) * rho) expect.insert({x0, x1});
      }
    }
    EXPECT_EQ(got, expect) << "ray " << i;
  }
}

TEST(RayEnumerate, WiderRadiusGivesSupersetOfCandidates) {
  PointConfig cfg = visible();
  cfg.alpha = Shift::parse({"sqrt2", "sqrt3"});
  CounterRng rng(stream_key(23, "lorentz.scaling"), 0);
  for (int i = 0; i < 50; ++i) {
    const double q[] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double th = rng.uniform(0, 2 * std::numbers::pi);
    const double v[] = {std::cos(th), std::sin(th)};
    const double rho = rng.uniform(0.01, 0.1), s = 1 + 3 * rng.uniform();
    const double xi = 3;
    // Threshold xi / rho in Boltzmann-Grad units.
    const auto narrow = ray_enumerate(ScattererField(cfg, rho, q), q, v, xi / rho);
    const auto wide = ray_enumerate(ScattererField(cfg, rho * s, q), q, v, xi / rho);
    std::set<Pos> a, b;
    for (const auto& c : narrow) a.insert(c.position);
    for (const auto& c : wide) {
      if (c.perp2 <= static_cast<long double>(rho) * rho) b.insert(c.position);
    }
    EXPECT_EQ(a, b);
  }
}

TEST(MeanBound, CylinderCountStaysBounded) {
  // Points in the cylinder of radius rho = e^{-t} and length xi / rho around a
  // uniform direction. The mean is vol * density = 2 xi / zeta(2) for every t.
  const PointConfig cfg = visible();
  const double xi = 1.0, density = 6 / (std::numbers::pi * std::numbers::pi);
  const double q[] = {std::sqrt(2.0) / 10, std::sqrt(3.0) / 10};
  for (double t : {2.0, 4.0, 6.0}) {
    const double rho = std::exp(-t);
    const ScattererField field(cfg, rho, q);
    CounterRng rng(stream_key(29, "lorentz.meanbound"), static_cast<std::uint64_t>(t));
    MeanAccumulator acc;
    for (int i = 0; i < 4000; ++i) {
      const double th = rng.uniform(0, 2 * std::numbers::pi);
      const double v[] = {std::cos(th), std::sin(th)};
      acc.add(static_cast<double>(ray_enumerate(field, q, v, xi / rho).size()));
    }
    EXPECT_LE(acc.mean(), 2 * (2 * xi) * density) << t;
    EXPECT_NEAR(acc.mean(), 2 * xi * density, 5 * acc.stderr_of_mean() + 0.05) << t;
  }
}

TEST(FplDistribution, SurvivalIsMonotoneFromOne) {
  const double q[] = {std::sqrt(2.0) / 10, std::sqrt(3.0) / 10};
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.1 * i);
  const auto curves = fpl_distribution(visible(), q, {0.05, 0.02}, grid, 2000, {}, 5);
  ASSERT_EQ(curves.size(), 2u);
  for (const auto& c : curves) {
    EXPECT_EQ(c.survival.front(), 1.0);
    for (std::size_t i = 1; i < c.survival.size(); ++i) EXPECT_LE(c.survival[i], c.survival[i - 1]);
    EXPECT_GE(c.censored_fraction, 0.0);
    EXPECT_LE(c.censored_fraction, c.survival.back());
  }
}

TEST(FplDistribution, IndependentOfJobs) {
  const double q[] = {0.31, 0.17};
  const std::vector<double> grid{0, 1, 2};
  const auto a = fpl_distribution(visible(), q, {0.03}, grid, 500, {}, 8, 1);
  const auto b = fpl_distribution(visible(), q, {0.03}, grid, 500, {}, 8, 4);
  EXPECT_EQ(a[0].survival, b[0].survival);
  const auto sa = a[0].scaled_paths.sorted(), sb = b[0].scaled_paths.sorted();
  EXPECT_TRUE(std::equal(sa.begin(), sa.end(), sb.begin(), sb.end()));
}

TEST(FplDistribution, RejectsBadInput) {
  const double q[] = {0.31, 0.17};
  EXPECT_THROW(fpl_distribution(visible(), q, {0.03}, {1, 0.5}, 10, {}, 1), ConfigError);
  EXPECT_THROW(fpl_distribution(visible(), q, {0.6}, {1}, 10, {}, 1), ConfigError);
  EXPECT_THROW(fpl_distribution(visible(), q, {0.03}, {1}, 0, {}, 1), ConfigError);
}

}  // namespace
}  // namespace latstat
