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
#include <map>
#include <numbers>
#include <set>

#include "latstat/error.hpp"
#include "latstat/homogeneous.hpp"
#include "latstat/primes.hpp"

namespace latstat {
namespace {

ResidueWindow primitive_at(std::vector<std::uint64_t> primes) {
  return reduce_mod_level(CongruenceWindow::truncated(FamilySpec::primitive(2), std::move(primes)));
}

// Midpoint rule for the integral of y^-k dx dy over the fundamental domain,
// substituting s = 1/y on (0, 1/sqrt(1 - x^2)).
double fd_integral(int k) {
  const int nx = 2000, ns = 2000;
  double total = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = -0.5 + (i + 0.5) / nx;
    const double smax = 1.0 / std::sqrt(1.0 - x * x);
    double inner = 0.0;
    for (int j = 0; j < ns; ++j) {
      const double s = (j + 0.5) * smax / ns;
      inner += std::pow(s, k - 2);  // y^-k dy = s^(k-2) ds
    }
    total += inner * smax / ns / nx;
  }
  return total;
}

TEST(SampleModular, AcceptanceRateAndSupport) {
  // Replays the documented proposal on the same stream and checks that the
  // accepted draw is exactly what the sampler returns.
  const std::uint64_t key = stream_key(1, "homogeneous.modular");
  const double y0 = std::sqrt(3.0) / 2;
  CounterRng lib(key, 0), replay(key, 0);
  std::uint64_t proposals = 0, accepted = 0;
  while (proposals < 100000) {
    const auto s = sample_modular(lib);
    for (;;) {
      ++proposals;
      const double x = replay.uniform() - 0.5;
      const double y = y0 / (1.0 - replay.uniform());
      if (x * x + y * y >= 1.0) {
        const double theta = 2 * std::numbers::pi * replay.uniform();
        ASSERT_EQ(s.x, x);
        ASSERT_EQ(s.y, y);
        ASSERT_EQ(s.theta, theta);
        break;
      }
    }
    ++accepted;
    ASSERT_GE(s.y, y0);
    ASSERT_LE(std::abs(s.x), 0.5);
    ASSERT_GE(s.x * s.x + s.y * s.y, 1.0);
  }
  const double area = fd_integral(2);
  EXPECT_NEAR(area, std::numbers::pi / 3, 1e-4);
  const double expected_rate = area / (2 / std::sqrt(3.0));
  EXPECT_NEAR(static_cast<double>(accepted) / proposals, expected_rate, 0.01);
  EXPECT_NEAR(expected_rate, 0.9069, 1e-3);
}

TEST(SampleModular, InverseSquareMomentMatchesQuadrature) {
  CounterRng rng(stream_key(2, "homogeneous.moment"), 0);
  MeanAccumulator acc;
  for (int i = 0; i < 200000; ++i) {
    const auto s = sample_modular(rng);
    acc.add(1.0 / (s.y * s.y));
  }
  const double expect = fd_integral(4) / fd_integral(2);
  EXPECT_NEAR(acc.mean(), expect, 0.01 * expect);
}

TEST(LatticeMatrix, Examples) {
  const auto id = lattice_matrix({0.0, 1.0, 0.0});
  EXPECT_EQ(id, (Mat2{1, 0, 0, 1}));
  const auto diag = lattice_matrix({0.0, 4.0, 0.0});
  EXPECT_EQ(diag, (Mat2{0.5, 0, 0, 2}));
  CounterRng rng(stream_key(3, "homogeneous.det"), 0);
  for (int i = 0; i < 10000; ++i) ASSERT_NEAR(det(lattice_matrix(sample_modular(rng))), 1.0, 1e-12);
}

TEST(SL2, OrderAndEnumeration) {
  EXPECT_EQ(sl2_order(1), 1u);
  EXPECT_EQ(sl2_order(2), 6u);
  EXPECT_EQ(sl2_order(30), 17280u);
  EXPECT_EQ(enumerate_sl2(30).size(), 17280u);
  EXPECT_EQ(enumerate_sl2(12).size(), sl2_order(12));
  EXPECT_THROW(SL2Sampler(1001), ResourceLimitError);
}

TEST(SL2, SamplerImageIsTheGroup) {
  for (std::uint64_t N : {1u, 2u, 12u, 30u}) {
    const SL2Sampler sampler(N);
    ASSERT_EQ(sampler.order(), sl2_order(N));
    std::set<Sl2Element> image;
    for (std::uint64_t r = 0; r < sampler.row_count(); ++r) {
      for (std::uint64_t t = 0; t < N; ++t) image.insert(sampler.element(r, t));
    }
    const auto all = enumerate_sl2(N);
    EXPECT_EQ(image, std::set<Sl2Element>(all.begin(), all.end())) << N;
  }
}

TEST(SL2, UniformDraws) {
  const SL2Sampler sampler(30);
  const auto all = enumerate_sl2(30);
  std::map<Sl2Element, std::size_t> index;
  for (std::size_t i = 0; i < all.size(); ++i) index[all[i]] = i;
  std::vector<std::uint64_t> counts(all.size(), 0);
  CounterRng rng(stream_key(4, "homogeneous.sl2"), 0);
  const std::uint64_t n = 1000000;
  for (std::uint64_t i = 0; i < n; ++i) ++counts[index.at(sampler.draw(rng))];
  const double e = static_cast<double>(n) / all.size();
  double chi2 = 0.0;
  for (auto c : counts) chi2 += (c - e) * (c - e) / e;
  // Upper 1e-3 quantile of chi-square with k - 1 dof, normal approximation.
  const double dof = static_cast<double>(all.size() - 1);
  EXPECT_LT(chi2, dof + 3.0902 * std::sqrt(2 * dof));
}

TEST(Marked, TranslationMarginalIsUniform) {
  const SL2Sampler sampler(30);
  CounterRng rng(stream_key(5, "homogeneous.w"), 0);
  const std::uint64_t n = 1000000;
  std::vector<std::uint64_t> counts(900, 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto g = sample_marked_affine(sampler, rng);
    ASSERT_GE(g.u[0], 0.0);
    ASSERT_LT(g.u[1], 1.0);
    ++counts[g.w[0] * 30 + g.w[1]];
  }
  const double p = 1.0 / 900, sd = std::sqrt(n * p * (1 - p));
  for (auto c : counts) EXPECT_LT(std::abs(c - n * p), 4 * sd);
}

TEST(Marked, LevelOneIsPlainLattice) {
  const SL2Sampler sampler(1);
  CounterRng rng(stream_key(6, "homogeneous.level1"), 0);
  const auto window = ResidueWindow::full(2, 1);
  const auto box = Region::box({-1.5, -1.5}, {1.5, 1.5});
  for (int i = 0; i < 200; ++i) {
    const auto g = sample_marked(sampler, rng);
    EXPECT_EQ(g.U, (Sl2Element{0, 0, 0, 0}));
    // Direct scan of Z^2 M over a generous coefficient box.
    std::uint64_t direct = 0;
    const auto& M = g.real;
    for (int a = -60; a <= 60; ++a) {
      for (int b = -60; b <= 60; ++b) {
        if (a == 0 && b == 0) continue;
        direct += box.contains({a * M[0] + b * M[2], a * M[1] + b * M[3]});
      }
    }
    ASSERT_EQ(marked_points_in_region(g, window, box), direct);
  }
}

TEST(Marked, DegenerateRegionIsEmpty) {
  const SL2Sampler sampler(30);
  const auto window = primitive_at({2, 3, 5});
  CounterRng rng(stream_key(7, "homogeneous.degenerate"), 0);
  const auto line = Region::box({0.1, 0.2}, {0.9, 0.2});
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(marked_points_in_region(sample_marked_affine(sampler, rng), window, line), 0u);
}

TEST(Marked, LevelMismatchRejected) {
  const SL2Sampler sampler(6);
  CounterRng rng(stream_key(8, "homogeneous.mismatch"), 0);
  EXPECT_THROW(marked_points_in_region(sample_marked(sampler, rng), primitive_at({2, 3, 5}), Region::cylinder(1)),
               ConfigError);
}

TEST(MeanValue, SiegelAndSiegelWeil) {
  for (const auto& [window, expected_box] :
       std::vector<std::pair<ResidueWindow, double>>{{ResidueWindow::full(2, 1), 4.0}, {primitive_at({2, 3, 5}), 2.56}}) {
    const auto rows = siegel_check(window, 20000, 13, 8);
    ASSERT_EQ(rows.size(), 18u);
    EXPECT_NEAR(rows[0].expected, expected_box, 1e-12);
    EXPECT_NEAR(rows[9].expected, expected_box, 1e-12);
    for (const auto& r : rows) EXPECT_LT(std::abs(r.zscore), 4.0) << r.region;
  }
}

TEST(MeanValue, IndependentOfJobs) {
  const auto a = siegel_check(primitive_at({2, 3}), 2000, 1, 3, 1);
  const auto b = siegel_check(primitive_at({2, 3}), 2000, 1, 3, 5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].empirical, b[i].empirical);
}

TEST(LimitFpl, MonotoneFromOne) {
  const auto r = limit_fpl_mc({0.0, 0.25, 0.5, 1, 2, 4}, primitive_at({2, 3, 5}), ShiftMode::irrational(), 20000, 3);
  EXPECT_EQ(r.survival.front(), 1.0);
  for (std::size_t i = 1; i < r.survival.size(); ++i) EXPECT_LE(r.survival[i], r.survival[i - 1]);
  EXPECT_THROW(limit_fpl_mc({1.0, 0.5}, primitive_at({2}), ShiftMode::irrational(), 10, 1), ConfigError);
}

TEST(LimitFpl, ZeroRationalShiftIsTheLinearCase) {
  const auto window = primitive_at({2, 3, 5});
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const std::uint64_t n = 40000;
  const auto r = limit_fpl_mc(grid, window, ShiftMode::rational({Fraction::make(0, 1), Fraction::make(0, 1)}), n, 4);
  // Independent linear-case estimate with its own stream.
  const SL2Sampler sampler(30);
  const auto cyl = Region::cylinder(grid.back());
  std::vector<double> first;
  for (std::uint64_t i = 0; i < n; ++i) {
    CounterRng rng(stream_key(99, "test.linear"), i);
    double best = std::numeric_limits<double>::infinity();
    visit_marked_points(sample_marked(sampler, rng), window, cyl, [&](Vec2 p) { best = std::min(best, p[0]); });
    first.push_back(best);
  }
  const auto ref = EmpiricalDistribution::from_sample(first);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = r.survival[i], b = ref.survival(grid[i]);
    EXPECT_LE(std::abs(a - b), 4 * std::hypot(binomial_stderr(a, n), binomial_stderr(b, n))) << grid[i];
  }
  // Minkowski: the symmetric box |x1| < xi, |x2| < 1 of area 4 xi >= 4
  // holds a primitive vector, and it or its negative lies in the cylinder.
  EXPECT_GT(r.survival[0], 0.1);
  EXPECT_EQ(r.survival[1], 0.0);
  EXPECT_EQ(r.survival[2], 0.0);
}

TEST(LimitFpl, LevelRefinementLeavesEstimatesUnchanged) {
  // S = {2, 3} at level 6 vs the same window lifted to level 30.
  const auto coarse = primitive_at({2, 3});
  const auto fine = coarse.lift(30);
  ASSERT_EQ(fine.density(), coarse.density());
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const std::uint64_t n = 40000;
  for (const auto& mode : {ShiftMode::irrational(), ShiftMode::rational({Fraction::make(1, 2), Fraction::make(1, 2)})}) {
    const auto a = limit_fpl_mc(grid, coarse, mode, n, 5);
    const auto b = limit_fpl_mc(grid, fine, mode, n, 6);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_LT(std::abs(a.survival[i] - b.survival[i]), 4 * std::hypot(a.stderr[i], b.stderr[i]))
          << mode.describe() << " " << grid[i];
    }
  }
}

TEST(LimitFpl, IndependentOfJobs) {
  const auto window = primitive_at({2, 3, 5});
  const auto a = limit_fpl_mc({1.0, 2.0}, window, ShiftMode::irrational(), 3000, 9, 1);
  const auto b = limit_fpl_mc({1.0, 2.0}, window, ShiftMode::irrational(), 3000, 9, 8);
  EXPECT_EQ(a.survival, b.survival);
}

TEST(LimitDir, MeanIsSigma) {
  const auto window = primitive_at({2, 3, 5});
  for (double sigma : {0.5, 2.0}) {
    const auto d = limit_dir_mc(sigma, 0.0, window, ShiftMode::irrational(), 40000, 7);
    EXPECT_NEAR(d.mean(), sigma, 4 * d.mean_stderr()) << sigma;
    const auto r = limit_dir_mc(sigma, 0.3, window, ShiftMode::rational({Fraction::make(1, 2), Fraction::make(1, 2)}),
                                40000, 7);
    EXPECT_NEAR(r.mean(), sigma, 4 * r.mean_stderr()) << sigma;
  }
}

TEST(LimitDir, SmallSigmaIsPointMassAtZero) {
  const auto d = limit_dir_mc(1e-9, 0.0, primitive_at({2, 3, 5}), ShiftMode::irrational(), 5000, 8);
  EXPECT_EQ(d.prob(0), 1.0);
}

}  // namespace
}  // namespace latstat
