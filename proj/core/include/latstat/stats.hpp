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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace latstat {

// Either a sorted real sample (continuous; +inf marks censored values) or a
// histogram over r = 0, 1, 2, ... (discrete).
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  static EmpiricalDistribution from_sample(std::vector<double> values);
  static EmpiricalDistribution from_counts(std::vector<std::uint64_t> counts);

  bool discrete() const { return discrete_; }
  bool empty() const { return n_ == 0; }
  std::uint64_t size() const { return n_; }

  // Continuous view.
  std::span<const double> sorted() const { return sample_; }
  double cdf(double x) const;       // fraction of values <= x
  double survival(double x) const;  // fraction of values >= x
  std::uint64_t censored() const;   // number of +inf values

  // Discrete view.
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  double prob(std::size_t r) const;
  double prob_stderr(std::size_t r) const;

  // Mean and its standard error (finite values only for samples).
  double mean() const;
  double mean_stderr() const;

 private:
  bool discrete_ = false;
  std::uint64_t n_ = 0;
  std::vector<double> sample_;
  std::vector<std::uint64_t> counts_;
};

// Standard error of a Bernoulli frequency p estimated from n trials.
double binomial_stderr(double p, std::uint64_t n);

// Running mean and variance (Welford updates, Chan et al. merges).
class MeanAccumulator {
 public:
  void add(double x);
  void merge(const MeanAccumulator& other);
  std::uint64_t count() const { return n_; }
  double mean() const { return static_cast<double>(mean_); }
  double variance() const;  // unbiased
  double stderr_of_mean() const;

 private:
  std::uint64_t n_ = 0;
  long double mean_ = 0;
  long double m2_ = 0;  // sum of squared deviations from the mean
};

}  // namespace latstat
