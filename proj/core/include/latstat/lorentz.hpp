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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "latstat/directions.hpp"
#include "latstat/pointset.hpp"
#include "latstat/stats.hpp"

namespace latstat {

// Balls of radius rho centred at the points x + alpha of a point set, where
// x = m B ranges over integer vectors whose window coordinates m are
// accepted. Membership is evaluated lazily along each ray; the annulus
// parameters of the config are ignored.
class ScattererField {
 public:
  // When q coincides with a centre, that ball is excluded.
  ScattererField(PointConfig points, double radius, std::span<const double> q);

  const PointConfig& points() const { return points_; }
  double radius() const { return radius_; }
  const std::optional<std::vector<std::int64_t>>& excluded() const { return excluded_; }
  unsigned dimension() const { return points_.dimension; }

  // Window test for integer position x (also fills window coordinates m).
  bool member(std::span<const std::int64_t> x, std::span<std::int64_t> m) const;
  bool is_excluded(std::span<const std::int64_t> x) const;

 private:
  PointConfig points_;
  double radius_;
  std::optional<std::vector<std::int64_t>> excluded_;
  std::optional<std::vector<std::int64_t>> origin_;  // x with x + alpha = 0 when the origin is removed
  MembershipTest membership_;
};

struct FlightResult {
  bool hit = false;
  double tau = 0.0;                    // hit time, or t_max when censored
  std::vector<std::int64_t> hit_point; // window coordinates m of the hit centre
  std::vector<std::int64_t> hit_position;  // integer position x (centre = x + alpha)
  std::uint64_t slabs = 0;             // slabs traversed

  bool censored() const { return !hit; }
};

// A set point near the ray: centre c = x + alpha with along-ray coordinate
// s = <c - q, v> and squared perpendicular distance h2.
struct RayCandidate {
  std::vector<std::int64_t> position;  // x
  std::vector<std::int64_t> window_coords;  // m
  long double along = 0;
  long double perp2 = 0;
};

// Set points with h <= rho and 0 < s <= t_max, in increasing order of s,
// found by walking unit slabs transverse to the dominant axis of v.
std::vector<RayCandidate> ray_enumerate(const ScattererField& field, std::span<const double> q,
                                        std::span<const double> v, double t_max);

// Smallest t in (0, t_max] with |q + t v - c| <= rho over set centres c.
// Throws ConfigError when q lies strictly inside a non-excluded scatterer.
FlightResult free_path(const ScattererField& field, std::span<const double> q, std::span<const double> v,
                       double t_max);

struct FplCurve {
  double rho = 0.0;
  EmpiricalDistribution scaled_paths;  // rho^{d-1} tau, +inf when censored
  double censored_fraction = 0.0;
  std::vector<double> xi;
  std::vector<double> survival;  // fraction with rho^{d-1} tau >= xi
  std::vector<double> stderr;
};

// Empirical survival functions of rho^{d-1} tau over random directions.
// Directions are drawn from one stream indexed by flight number and reused
// for every rho. t_max = (xi_max + 1) rho^{1-d}.
std::vector<FplCurve> fpl_distribution(const PointConfig& points, std::span<const double> q,
                                       const std::vector<double>& rhos, const std::vector<double>& xi_grid,
                                       std::uint64_t n_dirs, const LambdaSpec& lambda, std::uint64_t seed,
                                       unsigned jobs = 1);

}  // namespace latstat
