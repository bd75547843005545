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

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "latstat/rational.hpp"
#include "latstat/region.hpp"
#include "latstat/rng.hpp"
#include "latstat/stats.hpp"
#include "latstat/window.hpp"

namespace latstat {

// Row-major 2x2 real matrix; rows are the lattice basis vectors.
using Mat2 = std::array<double, 4>;
// Row-major 2x2 matrix over Z/N with entries in [0, N).
using Sl2Element = std::array<std::int64_t, 4>;

inline constexpr std::uint64_t kMaxSl2Level = 1000;

// Point of SL2(Z)\SL2(R) in Iwasawa coordinates: (x, y) in the standard
// fundamental domain, theta the rotation angle.
struct ModularSample {
  double x = 0.0;
  double y = 1.0;
  double theta = 0.0;
};

// Haar-distributed sample; rejection from the strip |x| <= 1/2, y >= sqrt(3)/2.
ModularSample sample_modular(CounterRng& rng);

// M = [[1/sqrt(y), 0], [x/sqrt(y), sqrt(y)]] * R(theta); the lattice is Z^2 M.
Mat2 lattice_matrix(const ModularSample& s);

inline double det(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

// |SL2(Z/N)| = N^3 prod_{p | N} (1 - p^-2).
std::uint64_t sl2_order(std::uint64_t N);

// Every element of SL2(Z/N), lexicographic in (a, b, c, d).
std::vector<Sl2Element> enumerate_sl2(std::uint64_t N);

// Uniform draws from SL2(Z/N): a uniform unimodular first row, then a
// uniform completion among the N matrices sharing it.
class SL2Sampler {
 public:
  explicit SL2Sampler(std::uint64_t N);

  std::uint64_t level() const { return level_; }
  std::uint64_t order() const { return rows_.size() * level_; }
  Sl2Element draw(CounterRng& rng) const;
  // The element with row index i and completion t, for exhaustive checks.
  Sl2Element element(std::uint64_t row, std::uint64_t t) const;
  std::uint64_t row_count() const { return rows_.size(); }

 private:
  std::uint64_t level_;
  std::vector<Sl2Element> rows_;  // (a, b, c0, d0) with a d0 - b c0 = 1 mod N
};

struct MarkedLattice {
  Mat2 real{1, 0, 0, 1};
  std::uint64_t level = 1;
  Sl2Element U{0, 0, 0, 0};
};

struct MarkedAffineLattice {
  MarkedLattice lattice;
  Vec2 u{0.0, 0.0};                 // real translation in lattice coordinates
  std::array<std::int64_t, 2> w{0, 0};  // finite translation mod N
};

MarkedLattice sample_marked(const SL2Sampler& sampler, CounterRng& rng);
MarkedAffineLattice sample_marked_affine(const SL2Sampler& sampler, CounterRng& rng);

using MarkedPointVisitor = std::function<void(Vec2 p)>;

// Linear case: points (n / D) M with n != 0 and n U mod N in the window,
// where D is the window denominator and N its modulus (= lattice level).
void visit_marked_points(const MarkedLattice& g, const ResidueWindow& window, const Region& region,
                         const MarkedPointVisitor& visit);
// Affine case: points (m + u) M with m U + w mod N in the window (D = 1).
void visit_marked_points(const MarkedAffineLattice& g, const ResidueWindow& window, const Region& region,
                         const MarkedPointVisitor& visit);

std::uint64_t marked_points_in_region(const MarkedLattice& g, const ResidueWindow& window, const Region& region);
std::uint64_t marked_points_in_region(const MarkedAffineLattice& g, const ResidueWindow& window,
                                      const Region& region);

// Irrational shifts use affine marked lattices with the window unchanged.
// Rational shifts alpha use linear marked lattices with the window W + alpha
// at the raised level.
struct ShiftMode {
  enum class Kind { kIrrational, kRational };
  Kind kind = Kind::kIrrational;
  std::vector<Fraction> alpha;

  static ShiftMode irrational() { return {}; }
  static ShiftMode rational(std::vector<Fraction> alpha) { return {Kind::kRational, std::move(alpha)}; }
  std::string describe() const;
};

struct LimitFpl {
  EmpiricalDistribution first_entry;  // min x1 over marked points in the cylinder of length xi_max
  std::vector<double> xi;
  std::vector<double> survival;  // fraction of samples with an empty cylinder of length xi
  std::vector<double> stderr;
};

LimitFpl limit_fpl_mc(const std::vector<double>& xi_grid, const ResidueWindow& window, const ShiftMode& mode,
                      std::uint64_t n_samples, std::uint64_t seed, unsigned jobs = 1);

// Law of the number of marked points in the cone c < x1 < 1 whose volume
// times the window density is sigma.
EmpiricalDistribution limit_dir_mc(double sigma, double c, const ResidueWindow& window, const ShiftMode& mode,
                                   std::uint64_t n_samples, std::uint64_t seed, unsigned jobs = 1);

struct SiegelRow {
  std::string region;
  double expected = 0.0;
  double empirical = 0.0;
  double stderr = 0.0;
  double zscore = 0.0;
};

// Mean counts vs vol(A) |W| / N^2 for the box [-1,1]^2 and n_boxes random
// boxes, with both the linear and the affine sampler.
std::vector<SiegelRow> siegel_check(const ResidueWindow& window, std::uint64_t n_samples, std::uint64_t seed,
                                    unsigned n_boxes = 20, unsigned jobs = 1);

}  // namespace latstat
