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

#include "latstat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latstat {

EmpiricalDistribution EmpiricalDistribution::from_sample(std::vector<double> values) {
  EmpiricalDistribution d;
  d.discrete_ = false;
  std::sort(values.begin(), values.end());
  d.n_ = values.size();
  d.sample_ = std::move(values);
  return d;
}

EmpiricalDistribution EmpiricalDistribution::from_counts(std::vector<std::uint64_t> counts) {
  EmpiricalDistribution d;
  d.discrete_ = true;
  while (!counts.empty() && counts.back() == 0) counts.pop_back();
  for (auto c : counts) d.n_ += c;
  d.counts_ = std::move(counts);
  return d;
}

double EmpiricalDistribution::cdf(double x) const {
  if (n_ == 0) return 0.0;
  if (discrete_) {
    if (x < 0) return 0.0;
    std::uint64_t acc = 0;
    const auto upto = static_cast<std::size_t>(std::floor(x));
    for (std::size_t r = 0; r < counts_.size() && r <= upto; ++r) acc += counts_[r];
    return static_cast<double>(acc) / static_cast<double>(n_);
  }
  const auto it = std::upper_bound(sample_.begin(), sample_.end(), x);
  return static_cast<double>(it - sample_.begin()) / static_cast<double>(n_);
}

double EmpiricalDistribution::survival(double x) const {
  if (n_ == 0) return 0.0;
  if (discrete_) {
    std::uint64_t acc = 0;
    for (std::size_t r = 0; r < counts_.size(); ++r) {
      if (static_cast<double>(r) >= x) acc += counts_[r];
    }
    return static_cast<double>(acc) / static_cast<double>(n_);
  }
  const auto it = std::lower_bound(sample_.begin(), sample_.end(), x);
  return static_cast<double>(sample_.end() - it) / static_cast<double>(n_);
}

std::uint64_t EmpiricalDistribution::censored() const {
  return static_cast<std::uint64_t>(
      std::count(sample_.begin(), sample_.end(), std::numeric_limits<double>::infinity()));
}

double EmpiricalDistribution::prob(std::size_t r) const {
  if (n_ == 0 || r >= counts_.size()) return 0.0;
  return static_cast<double>(counts_[r]) / static_cast<double>(n_);
}

double EmpiricalDistribution::prob_stderr(std::size_t r) const { return binomial_stderr(prob(r), n_); }

double EmpiricalDistribution::mean() const {
  MeanAccumulator acc;
  if (discrete_) {
    long double s = 0;
    for (std::size_t r = 0; r < counts_.size(); ++r) s += static_cast<long double>(r) * counts_[r];
    return n_ ? static_cast<double>(s / n_) : 0.0;
  }
  for (double v : sample_) {
    if (std::isfinite(v)) acc.add(v);
  }
  return acc.mean();
}

double EmpiricalDistribution::mean_stderr() const {
  if (discrete_) {
    if (n_ < 2) return 0.0;
    const long double m = mean();
    long double ss = 0;
    for (std::size_t r = 0; r < counts_.size(); ++r) {
      const long double dv = static_cast<long double>(r) - m;
      ss += dv * dv * counts_[r];
    }
    return static_cast<double>(std::sqrt(ss / (n_ - 1) / n_));
  }
  MeanAccumulator acc;
  for (double v : sample_) {
    if (std::isfinite(v)) acc.add(v);
  }
  return acc.stderr_of_mean();
}

double binomial_stderr(double p, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

void MeanAccumulator::add(double x) {
  ++n_;
  const long double delta = x - mean_;
  mean_ += delta / n_;
  m2_ += delta * (x - mean_);
}

void MeanAccumulator::merge(const MeanAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const long double n = static_cast<long double>(n_) + other.n_;
  const long double delta = other.mean_ - mean_;
  mean_ += delta * other.n_ / n;
  m2_ += other.m2_ + delta * delta * n_ * other.n_ / n;
  n_ += other.n_;
}

double MeanAccumulator::variance() const {
  if (n_ < 2) return 0.0;
  return static_cast<double>(m2_ / (n_ - 1));
}

double MeanAccumulator::stderr_of_mean() const {
  return n_ ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

}  // namespace latstat
