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

#include "latstat/stats.hpp"

namespace latstat {
namespace {

TEST(Empirical, SampleCdfAndSurvival) {
  const double inf = std::numeric_limits<double>::infinity();
  const auto d = EmpiricalDistribution::from_sample({3.0, 1.0, 2.0, 2.0, inf});
  EXPECT_FALSE(d.discrete());
  EXPECT_EQ(d.size(), 5u);
  EXPECT_EQ(d.censored(), 1u);
  EXPECT_DOUBLE_EQ(d.cdf(0.5), 0.0);
  EXPECT_DOUBLE_EQ(d.cdf(2.0), 0.6);
  EXPECT_DOUBLE_EQ(d.survival(2.0), 0.8);
  EXPECT_DOUBLE_EQ(d.survival(2.5), 0.4);
  EXPECT_DOUBLE_EQ(d.survival(1e300), 0.2);
  // Censored values are dropped from the mean.
  EXPECT_DOUBLE_EQ(d.mean(), 2.0);
  EXPECT_NEAR(d.mean_stderr(), std::sqrt((2.0 / 3.0) / 4.0), 1e-15);
}

TEST(Empirical, CountsView) {
  const auto d = EmpiricalDistribution::from_counts({2, 0, 6, 0, 0});
  EXPECT_TRUE(d.discrete());
  EXPECT_EQ(d.counts().size(), 3u);
  EXPECT_EQ(d.size(), 8u);
  EXPECT_DOUBLE_EQ(d.prob(0), 0.25);
  EXPECT_DOUBLE_EQ(d.prob(1), 0.0);
  EXPECT_DOUBLE_EQ(d.prob(7), 0.0);
  EXPECT_DOUBLE_EQ(d.cdf(1.5), 0.25);
  EXPECT_DOUBLE_EQ(d.cdf(-0.5), 0.0);
  EXPECT_DOUBLE_EQ(d.survival(1.0), 0.75);
  EXPECT_DOUBLE_EQ(d.mean(), 1.5);
  // Sample variance of {0,0,2,2,2,2,2,2} is 6/7.
  EXPECT_NEAR(d.mean_stderr(), std::sqrt(6.0 / 7.0 / 8.0), 1e-15);
  EXPECT_NEAR(d.prob_stderr(0), std::sqrt(0.25 * 0.75 / 8), 1e-15);
}

TEST(Empirical, Empty) {
  const auto d = EmpiricalDistribution::from_counts({});
  EXPECT_TRUE(d.empty());
  EXPECT_EQ(d.cdf(3), 0.0);
  EXPECT_EQ(d.mean_stderr(), 0.0);
}

TEST(MeanAccumulator, MergeMatchesSequential) {
  MeanAccumulator all, a, b;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i) * 10 + 1e8;
    all.add(x);
    (i < 37 ? a : b).add(x);
  }
  a.merge(b);
  EXPECT_EQ(a.count(), all.count());
  EXPECT_NEAR(a.mean(), all.mean(), 1e-7);
  EXPECT_NEAR(a.variance(), all.variance(), 1e-9);
  // Large offset must not destroy the variance.
  MeanAccumulator ref;
  for (int i = 0; i < 100; ++i) ref.add(std::sin(i) * 10);
  EXPECT_NEAR(all.variance(), ref.variance(), 1e-3 * ref.variance());
}

TEST(BinomialStderr, Formula) {
  EXPECT_DOUBLE_EQ(binomial_stderr(0.5, 100), 0.05);
  EXPECT_EQ(binomial_stderr(0.0, 10), 0.0);
  EXPECT_EQ(binomial_stderr(0.3, 0), 0.0);
}

}  // namespace
}  // namespace latstat
