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

#include "latstat/directions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "latstat/error.hpp"
#include "latstat/parallel.hpp"
#include "latstat/rng.hpp"

namespace latstat {

namespace {

constexpr double kMergeTolerance = 1e-14;

double to_turns(double x, double y) {
  double t = std::atan2(y, x) / (2.0 * std::numbers::pi);
  if (t < 0.0) t += 1.0;
  if (t >= 1.0) t = 0.0;
  return t;
}

// Prefix sums of multiplicities: prefix[i] = weight of entries [0, i).
std::vector<std::uint64_t> prefix_weights(const DirectionSample& s) {
  std::vector<std::uint64_t> prefix(s.distinct() + 1, 0);
  for (std::size_t i = 0; i < s.distinct(); ++i) prefix[i + 1] = prefix[i] + s.weight(i);
  return prefix;
}

// Weight of angles in [a, b), 0 <= a <= b <= 1.
std::uint64_t weight_between(const DirectionSample& s, const std::vector<std::uint64_t>& prefix, double a, double b) {
  const auto lo = std::lower_bound(s.angles.begin(), s.angles.end(), a) - s.angles.begin();
  const auto hi = std::lower_bound(s.angles.begin(), s.angles.end(), b) - s.angles.begin();
  return prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)];
}

std::uint64_t count_arc(const DirectionSample& s, const std::vector<std::uint64_t>& prefix, double centre,
                        double width) {
  if (width >= 1.0) return prefix.back();
  double a = centre - width / 2.0;
  a -= std::floor(a);
  const double b = a + width;
  if (b <= 1.0) return weight_between(s, prefix, a, b);
  return weight_between(s, prefix, a, 1.0) + weight_between(s, prefix, 0.0, b - 1.0);
}

double arc_width_turns(const CapParams& p) {
  const double w = cap_area(2, p) / (2.0 * std::numbers::pi);
  if (w > 1.0 + 1e-12) throw ConfigError("cap area exceeds the full circle");
  return std::min(w, 1.0);
}

std::uint64_t count_cap(const DirectionSample& s, std::span<const double> v, double cos_radius) {
  const unsigned d = s.dimension;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < s.distinct(); ++i) {
    double dot = 0.0;
    for (unsigned k = 0; k < d; ++k) dot += s.vectors[i * d + k] * v[k];
    if (dot > cos_radius) n += s.weight(i);
  }
  return n;
}

}  // namespace

DirectionSample project_directions(const PointBatch& batch, bool aggregate) {
  DirectionSample s;
  s.dimension = batch.dimension;
  s.source_count = batch.count;
  s.T = batch.T;
  s.c = batch.c;
  const unsigned d = batch.dimension;
  if (d == 2) {
    s.angles.reserve(batch.count);
    for (std::size_t i = 0; i < batch.count; ++i) {
      const auto p = batch.point(i);
      if (p[0] == 0.0 && p[1] == 0.0) throw ConfigError("zero vector in batch; exclude the origin first");
      s.angles.push_back(to_turns(p[0], p[1]));
    }
    std::sort(s.angles.begin(), s.angles.end());
    if (aggregate && !s.angles.empty()) {
      std::vector<double> merged{s.angles.front()};
      std::vector<std::uint64_t> mult{1};
      for (std::size_t i = 1; i < s.angles.size(); ++i) {
        if (s.angles[i] - merged.back() <= kMergeTolerance) {
          ++mult.back();
        } else {
          merged.push_back(s.angles[i]);
          mult.push_back(1);
        }
      }
      s.angles = std::move(merged);
      s.multiplicity = std::move(mult);
    }
    return s;
  }

  std::vector<std::vector<double>> units;
  units.reserve(batch.count);
  for (std::size_t i = 0; i < batch.count; ++i) {
    const auto p = batch.point(i);
    double norm = 0.0;
    for (double x : p) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw ConfigError("zero vector in batch; exclude the origin first");
    std::vector<double> u(p.begin(), p.end());
    for (double& x : u) x /= norm;
    units.push_back(std::move(u));
  }
  std::sort(units.begin(), units.end());
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (aggregate && !s.multiplicity.empty()) {
      const double* last = s.vectors.data() + s.vectors.size() - d;
      bool same = true;
      for (unsigned k = 0; k < d; ++k) same &= std::abs(last[k] - units[i][k]) <= kMergeTolerance;
      if (same) {
        ++s.multiplicity.back();
        continue;
      }
    }
    s.vectors.insert(s.vectors.end(), units[i].begin(), units[i].end());
    if (aggregate) s.multiplicity.push_back(1);
  }
  return s;
}

double sphere_area(unsigned d) { return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0); }

double cap_area(unsigned d, const CapParams& p) {
  if (!(p.sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(p.window_measure > 0.0)) throw ConfigError("window measure must be positive");
  if (!(p.c >= 0.0 && p.c < 1.0)) throw ConfigError("c must satisfy 0 <= c < 1");
  if (!(p.T > 0.0)) throw ConfigError("T must be positive");
  return p.sigma * d / ((1.0 - std::pow(p.c, d)) * p.window_measure * std::pow(p.T, d));
}

double cap_geodesic_radius(unsigned d, double area) {
  const double full = sphere_area(d);
  if (area > full * (1.0 + 1e-12)) throw ConfigError("cap area exceeds the sphere");
  area = std::min(area, full);
  switch (d) {
    case 2:
      return area / 2.0;
    case 3:
      return std::acos(std::clamp(1.0 - area / (2.0 * std::numbers::pi), -1.0, 1.0));
    case 4: {
      // area(phi) = 2 pi phi - pi sin(2 phi), increasing on [0, pi].
      double lo = 0.0, hi = std::numbers::pi;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double a = 2.0 * std::numbers::pi * mid - std::numbers::pi * std::sin(2.0 * mid);
        (a < area ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    default:
      throw UnsupportedError("spherical caps are implemented for d <= 4");
  }
}

std::uint64_t disc_count_angle(const DirectionSample& sample, double centre_turns, const CapParams& p) {
  if (sample.dimension != 2) throw UnsupportedError("angle-centred caps need d = 2");
  const auto prefix = prefix_weights(sample);
  return count_arc(sample, prefix, centre_turns - std::floor(centre_turns), arc_width_turns(p));
}

std::uint64_t disc_count(const DirectionSample& sample, std::span<const double> v, const CapParams& p) {
  if (v.size() != sample.dimension) throw ConfigError("cap centre has wrong dimension");
  if (sample.dimension == 2) return disc_count_angle(sample, to_turns(v[0], v[1]), p);
  const double radius = cap_geodesic_radius(sample.dimension, cap_area(sample.dimension, p));
  return count_cap(sample, v, std::cos(radius));
}

EmpiricalDistribution local_statistics(const DirectionSample& sample, const CapParams& p, const LambdaSpec& lambda,
                                       std::uint64_t n_draws, std::uint64_t seed, unsigned jobs) {
  const unsigned d = sample.dimension;
  if (!lambda.angular_weights.empty()) {
    if (d != 2) throw UnsupportedError("non-uniform cap-centre densities are implemented for d = 2");
    if (std::any_of(lambda.angular_weights.begin(), lambda.angular_weights.end(), [](double w) { return w < 0; }) ||
        std::all_of(lambda.angular_weights.begin(), lambda.angular_weights.end(), [](double w) { return w == 0; })) {
      throw ConfigError("angular weights must be non-negative and not all zero");
    }
  }
  const double wmax = lambda.angular_weights.empty()
                          ? 1.0
                          : *std::max_element(lambda.angular_weights.begin(), lambda.angular_weights.end());
  const auto prefix = prefix_weights(sample);
  double width = 0.0, cos_radius = 1.0;
  if (d == 2) {
    width = arc_width_turns(p);
  } else {
    cos_radius = std::cos(cap_geodesic_radius(d, cap_area(d, p)));
  }
  const std::uint64_t key = stream_key(seed, "directions.local_statistics");
  std::vector<std::uint64_t> result(n_draws);
  parallel_for(n_draws, jobs, [&](std::size_t i) {
    CounterRng rng(key, i);
    if (d == 2) {
      double theta = rng.uniform();
      if (!lambda.angular_weights.empty()) {
        const auto bins = lambda.angular_weights.size();
        for (;;) {
          const auto bin = std::min(bins - 1, static_cast<std::size_t>(theta * bins));
          if (rng.uniform() * wmax < lambda.angular_weights[bin]) break;
          theta = rng.uniform();
        }
      }
      result[i] = count_arc(sample, prefix, theta, width);
    } else {
      std::vector<double> v(d);
      double norm = 0.0;
      do {
        norm = 0.0;
        for (auto& x : v) {
          x = rng.normal();
          norm += x * x;
        }
      } while (norm == 0.0);
      norm = std::sqrt(norm);
      for (auto& x : v) x /= norm;
      result[i] = count_cap(sample, v, cos_radius);
    }
  });
  std::vector<std::uint64_t> hist;
  for (std::uint64_t r : result) {
    if (r >= hist.size()) hist.resize(r + 1, 0);
    ++hist[r];
  }
  return EmpiricalDistribution::from_counts(std::move(hist));
}

EmpiricalDistribution gap_distribution(const DirectionSample& sample) {
  if (sample.dimension != 2) throw UnsupportedError("gap distribution is defined for d = 2 only");
  const std::uint64_t n = std::accumulate(
      sample.multiplicity.begin(), sample.multiplicity.end(),
      sample.multiplicity.empty() ? static_cast<std::uint64_t>(sample.angles.size()) : std::uint64_t{0});
  if (n < 2) throw ConfigError("gap distribution needs at least two directions");
  const double scale = static_cast<double>(n);
  std::vector<double> gaps;
  gaps.reserve(n);
  const std::size_t k = sample.angles.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::uint64_t j = 1; j < sample.weight(i); ++j) gaps.push_back(0.0);
    const double next = (i + 1 < k) ? sample.angles[i + 1] : sample.angles[0] + 1.0;
    gaps.push_back(scale * (next - sample.angles[i]));
  }
  return EmpiricalDistribution::from_sample(std::move(gaps));
}

}  // namespace latstat
