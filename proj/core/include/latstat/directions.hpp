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

#include "latstat/pointset.hpp"
#include "latstat/stats.hpp"

namespace latstat {

// Radial projections of a point batch. In dimension 2 directions are angles
// in turns, sorted in [0, 1); otherwise unit vectors sorted lexicographically.
struct DirectionSample {
  unsigned dimension = 2;
  std::vector<double> angles;               // d == 2
  std::vector<double> vectors;              // d >= 3, flat
  std::vector<std::uint64_t> multiplicity;  // empty: every entry counts once
  std::uint64_t source_count = 0;           // N, total multiplicity
  double T = 0.0;
  double c = 0.0;

  std::size_t distinct() const { return dimension == 2 ? angles.size() : vectors.size() / dimension; }
  std::uint64_t weight(std::size_t i) const { return multiplicity.empty() ? 1 : multiplicity[i]; }
};

// One direction per point; with `aggregate`, directions closer than 1e-14
// are merged and carry a multiplicity. Throws ConfigError on a zero vector.
DirectionSample project_directions(const PointBatch& batch, bool aggregate = false);

struct CapParams {
  double sigma = 1.0;
  double c = 0.0;
  double T = 1.0;
  double window_measure = 1.0;
};

// Area sigma d / ((1 - c^d) m T^d) of the random cap (arc length for d = 2).
double cap_area(unsigned dimension, const CapParams& p);
// Geodesic radius of a cap of the given area on S^{d-1}, d <= 4.
double cap_geodesic_radius(unsigned dimension, double area);
double sphere_area(unsigned dimension);

// Number of directions in the cap centred at v (half-open arc for d = 2).
std::uint64_t disc_count(const DirectionSample& sample, std::span<const double> v, const CapParams& p);
// d = 2 convenience: centre given as an angle in turns.
std::uint64_t disc_count_angle(const DirectionSample& sample, double centre_turns, const CapParams& p);

// Distribution of the cap centre. Empty weights: uniform. Otherwise (d = 2)
// a piecewise-constant density over equal angular bins, sampled by rejection.
struct LambdaSpec {
  std::vector<double> angular_weights;
};

EmpiricalDistribution local_statistics(const DirectionSample& sample, const CapParams& p, const LambdaSpec& lambda,
                                       std::uint64_t n_draws, std::uint64_t seed, unsigned jobs = 1);

// Normalized gaps N (a'_{j+1} - a'_j) including the wraparound gap; d = 2.
EmpiricalDistribution gap_distribution(const DirectionSample& sample);

}  // namespace latstat
