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

#include "latstat/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "latstat/error.hpp"
#include "latstat/parallel.hpp"
#include "latstat/primes.hpp"

namespace latstat {

namespace {

std::int64_t modn(std::int64_t a, std::int64_t n) {
  return static_cast<std::int64_t>(mod_floor(a, static_cast<std::uint64_t>(n)));
}

}  // namespace

ModularSample sample_modular(CounterRng& rng) {
  const double y0 = std::sqrt(3.0) / 2.0;
  for (;;) {
    const double x = rng.uniform() - 0.5;
    const double y = y0 / (1.0 - rng.uniform());
    if (x * x + y * y >= 1.0) return {x, y, 2 * std::numbers::pi * rng.uniform()};
  }
}

Mat2 lattice_matrix(const ModularSample& s) {
  const double r = std::sqrt(s.y);
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  // [[1/r, 0], [x/r, r]] * [[c, sn], [-sn, c]]
  return {c / r, sn / r, s.x * c / r - r * sn, s.x * sn / r + r * c};
}

std::uint64_t sl2_order(std::uint64_t N) {
  if (N == 0) throw ConfigError("level must be positive");
  Rational order = Rational(N) * N * N;
  for (auto p : prime_factors(N)) order *= Rational(p * p - 1, p * p);
  return static_cast<std::uint64_t>(numerator(order));
}

std::vector<Sl2Element> enumerate_sl2(std::uint64_t N) {
  if (N == 0 || N > kMaxSl2Level) throw ResourceLimitError("SL2(Z/N) enumeration supports 1 <= N <= 1000");
  const auto n = static_cast<std::int64_t>(N);
  std::vector<Sl2Element> out;
  out.reserve(sl2_order(N));
  for (std::int64_t a = 0; a < n; ++a) {
    for (std::int64_t b = 0; b < n; ++b) {
      for (std::int64_t c = 0; c < n; ++c) {
        for (std::int64_t d = 0; d < n; ++d) {
          if (modn(a * d - b * c, n) == modn(1, n)) out.push_back({a, b, c, d});
        }
      }
    }
  }
  return out;
}

namespace {

// Integers (s, t) with a s + b t = gcd(a, b).
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t) {
  std::int64_t s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (b != 0) {
    const std::int64_t q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
  }
  s = s0;
  t = t0;
  return a;
}

}  // namespace

SL2Sampler::SL2Sampler(std::uint64_t N) : level_(N) {
  if (N == 0 || N > kMaxSl2Level) throw ResourceLimitError("SL2(Z/N) sampling supports 1 <= N <= 1000");
  const auto n = static_cast<std::int64_t>(N);
  for (std::int64_t a = 0; a < n; ++a) {
    for (std::int64_t b = 0; b < n; ++b) {
      if (gcd_abs(gcd_abs(a, b), n) != 1) continue;
      // Lift (a, b) to a primitive integer vector, then complete it.
      const std::int64_t bl = b == 0 ? n : b;
      std::int64_t al = a;
      while (gcd_abs(al, bl) != 1) al += n;
      std::int64_t s = 0, t = 0;
      ext_gcd(al, bl, s, t);  // al s + bl t = 1: rows (al, bl), (-t, s)
      rows_.push_back({a, b, modn(-t, n), modn(s, n)});
    }
  }
}

Sl2Element SL2Sampler::element(std::uint64_t row, std::uint64_t t) const {
  const auto& r = rows_.at(row);
  const auto n = static_cast<std::int64_t>(level_);
  const auto k = static_cast<std::int64_t>(t);
  return {r[0], r[1], modn(r[2] + k * r[0], n), modn(r[3] + k * r[1], n)};
}

Sl2Element SL2Sampler::draw(CounterRng& rng) const {
  const std::uint64_t row = rng.below(rows_.size());
  return element(row, rng.below(level_));
}

MarkedLattice sample_marked(const SL2Sampler& sampler, CounterRng& rng) {
  MarkedLattice g;
  g.real = lattice_matrix(sample_modular(rng));
  g.level = sampler.level();
  g.U = sampler.draw(rng);
  return g;
}

MarkedAffineLattice sample_marked_affine(const SL2Sampler& sampler, CounterRng& rng) {
  MarkedAffineLattice g;
  g.lattice = sample_marked(sampler, rng);
  g.u = {rng.uniform(), rng.uniform()};
  const auto n = sampler.level();
  g.w = {static_cast<std::int64_t>(rng.below(n)), static_cast<std::int64_t>(rng.below(n))};
  return g;
}

namespace {

// Visit p = offset + m1 b1 + m2 b2 inside the region for all integer m,
// scanning rows m2 between the support-function bounds.
template <class F>
void scan_lattice(const Mat2& basis, Vec2 offset, const Region& region, F&& fn) {
  const double delta = det(basis);
  if (delta == 0.0) return;
  // Second column of the inverse basis: m2 = <p - offset, col2>.
  const Vec2 col2{-basis[1] / delta, basis[0] / delta};
  const double shift = offset[0] * col2[0] + offset[1] * col2[1];
  const double hi = region.support(col2) - shift;
  const double lo = -region.support({-col2[0], -col2[1]}) - shift;
  const Vec2 b1{basis[0], basis[1]}, b2{basis[2], basis[3]};
  const auto m2_lo = static_cast<std::int64_t>(std::ceil(lo - 1e-9));
  const auto m2_hi = static_cast<std::int64_t>(std::floor(hi + 1e-9));
  for (std::int64_t m2 = m2_lo; m2 <= m2_hi; ++m2) {
    const Vec2 origin{offset[0] + m2 * b2[0], offset[1] + m2 * b2[1]};
    const auto range = region.clip_line(origin, b1);
    if (!range) continue;
    const auto m1_lo = static_cast<std::int64_t>(std::ceil(range->first - 1e-9));
    const auto m1_hi = static_cast<std::int64_t>(std::floor(range->second + 1e-9));
    for (std::int64_t m1 = m1_lo; m1 <= m1_hi; ++m1) {
      const Vec2 p{origin[0] + m1 * b1[0], origin[1] + m1 * b1[1]};
      if (region.contains(p)) fn(m1, m2, p);
    }
  }
}

void check_level(std::uint64_t level, const ResidueWindow& window) {
  if (window.dimension() != 2) throw ConfigError("marked lattices are implemented for d = 2");
  if (window.modulus() != level) {
    throw ConfigError("window level " + std::to_string(window.modulus()) + " does not match lattice level " +
                      std::to_string(level));
  }
}

}  // namespace

void visit_marked_points(const MarkedLattice& g, const ResidueWindow& window, const Region& region,
                         const MarkedPointVisitor& visit) {
  check_level(g.level, window);
  const auto n = static_cast<std::int64_t>(g.level);
  const double scale = 1.0 / static_cast<double>(window.denominator());
  const Mat2 basis{g.real[0] * scale, g.real[1] * scale, g.real[2] * scale, g.real[3] * scale};
  const auto& U = g.U;
  std::array<std::int64_t, 2> r{};
  scan_lattice(basis, {0.0, 0.0}, region, [&](std::int64_t m1, std::int64_t m2, Vec2 p) {
    if (m1 == 0 && m2 == 0) return;
    r[0] = modn(m1 * U[0] + m2 * U[2], n);
    r[1] = modn(m1 * U[1] + m2 * U[3], n);
    if (window.contains(r)) visit(p);
  });
}

void visit_marked_points(const MarkedAffineLattice& g, const ResidueWindow& window, const Region& region,
                         const MarkedPointVisitor& visit) {
  check_level(g.lattice.level, window);
  if (window.denominator() != 1) throw ConfigError("affine marked lattices need an integral window");
  const auto n = static_cast<std::int64_t>(g.lattice.level);
  const auto& M = g.lattice.real;
  const auto& U = g.lattice.U;
  const Vec2 offset{g.u[0] * M[0] + g.u[1] * M[2], g.u[0] * M[1] + g.u[1] * M[3]};
  std::array<std::int64_t, 2> r{};
  scan_lattice(M, offset, region, [&](std::int64_t m1, std::int64_t m2, Vec2 p) {
    r[0] = modn(m1 * U[0] + m2 * U[2] + g.w[0], n);
    r[1] = modn(m1 * U[1] + m2 * U[3] + g.w[1], n);
    if (window.contains(r)) visit(p);
  });
}

std::uint64_t marked_points_in_region(const MarkedLattice& g, const ResidueWindow& window, const Region& region) {
  std::uint64_t count = 0;
  visit_marked_points(g, window, region, [&](Vec2) { ++count; });
  return count;
}

std::uint64_t marked_points_in_region(const MarkedAffineLattice& g, const ResidueWindow& window,
                                      const Region& region) {
  std::uint64_t count = 0;
  visit_marked_points(g, window, region, [&](Vec2) { ++count; });
  return count;
}

std::string ShiftMode::describe() const {
  if (kind == Kind::kIrrational) return "irrational";
  std::ostringstream os;
  os << "rational(";
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i) os << ",";
    os << alpha[i].num;
    if (alpha[i].den != 1) os << "/" << alpha[i].den;
  }
  os << ")";
  return os.str();
}

namespace {

// Dispatches per-sample counting for either shift mode.
class MarkedSampler {
 public:
  MarkedSampler(const ResidueWindow& window, const ShiftMode& mode)
      : mode_(mode),
        window_(mode.kind == ShiftMode::Kind::kRational ? shifted(window, mode.alpha) : window),
        sampler_(window_.modulus()) {
    if (window.dimension() != 2) throw ConfigError("limit Monte Carlo is implemented for d = 2");
    if (window.denominator() != 1) throw ConfigError("limit Monte Carlo expects an unshifted window");
  }

  template <class F>
  void visit(CounterRng& rng, const Region& region, F&& fn) const {
    if (mode_.kind == ShiftMode::Kind::kRational) {
      visit_marked_points(sample_marked(sampler_, rng), window_, region, fn);
    } else {
      visit_marked_points(sample_marked_affine(sampler_, rng), window_, region, fn);
    }
  }

  const ResidueWindow& window() const { return window_; }

 private:
  static ResidueWindow shifted(const ResidueWindow& w, const std::vector<Fraction>& alpha) {
    if (alpha.size() != w.dimension()) throw ConfigError("shift has wrong dimension");
    std::vector<Fraction> beta;
    for (const auto& a : alpha) beta.push_back(-a);
    return shift_window(w, beta);
  }

  ShiftMode mode_;
  ResidueWindow window_;
  SL2Sampler sampler_;
};

}  // namespace

LimitFpl limit_fpl_mc(const std::vector<double>& xi_grid, const ResidueWindow& window, const ShiftMode& mode,
                      std::uint64_t n_samples, std::uint64_t seed, unsigned jobs) {
  if (xi_grid.empty()) throw ConfigError("xi grid must not be empty");
  for (std::size_t i = 1; i < xi_grid.size(); ++i) {
    if (!(xi_grid[i] > xi_grid[i - 1])) throw ConfigError("xi grid must be increasing");
  }
  if (!(xi_grid.back() > 0)) throw ConfigError("xi grid must reach a positive value");
  if (n_samples == 0) throw ConfigError("number of samples must be positive");
  const MarkedSampler sampler(window, mode);
  const Region cylinder = Region::cylinder(xi_grid.back());
  const std::uint64_t key = stream_key(seed, "homogeneous.limit_fpl");
  std::vector<double> first(n_samples);
  parallel_for(n_samples, jobs, [&](std::size_t i) {
    CounterRng rng(key, i);
    double best = std::numeric_limits<double>::infinity();
    sampler.visit(rng, cylinder, [&](Vec2 p) { best = std::min(best, p[0]); });
    first[i] = best;
  });
  LimitFpl out;
  out.first_entry = EmpiricalDistribution::from_sample(std::move(first));
  out.xi = xi_grid;
  for (double xi : xi_grid) {
    const double s = out.first_entry.survival(xi);
    out.survival.push_back(s);
    out.stderr.push_back(binomial_stderr(s, n_samples));
  }
  return out;
}

EmpiricalDistribution limit_dir_mc(double sigma, double c, const ResidueWindow& window, const ShiftMode& mode,
                                   std::uint64_t n_samples, std::uint64_t seed, unsigned jobs) {
  if (!(sigma > 0)) throw ConfigError("sigma must be positive");
  if (!(c >= 0 && c < 1)) throw ConfigError("c must lie in [0, 1)");
  if (n_samples == 0) throw ConfigError("number of samples must be positive");
  const MarkedSampler sampler(window, mode);
  const Region cone = Region::direction_cone(c, sigma, to_double(window.density()));
  const std::uint64_t key = stream_key(seed, "homogeneous.limit_dir");
  std::vector<std::uint64_t> counts(n_samples);
  parallel_for(n_samples, jobs, [&](std::size_t i) {
    CounterRng rng(key, i);
    std::uint64_t k = 0;
    sampler.visit(rng, cone, [&](Vec2) { ++k; });
    counts[i] = k;
  });
  std::vector<std::uint64_t> hist;
  for (std::uint64_t k : counts) {
    if (k >= hist.size()) hist.resize(k + 1, 0);
    ++hist[k];
  }
  return EmpiricalDistribution::from_counts(std::move(hist));
}

std::vector<SiegelRow> siegel_check(const ResidueWindow& window, std::uint64_t n_samples, std::uint64_t seed,
                                    unsigned n_boxes, unsigned jobs) {
  if (window.dimension() != 2 || window.denominator() != 1) {
    throw ConfigError("mean value check expects an unshifted planar window");
  }
  if (n_samples < 2) throw ConfigError("mean value check needs at least two samples");
  std::vector<Region> regions{Region::box({-1.0, -1.0}, {1.0, 1.0})};
  CounterRng box_rng(stream_key(seed, "homogeneous.siegel.boxes"), 0);
  for (unsigned b = 0; b < n_boxes; ++b) {
    const Vec2 lo{box_rng.uniform(-2.0, 1.0), box_rng.uniform(-2.0, 1.0)};
    const Vec2 side{box_rng.uniform(0.25, 2.0), box_rng.uniform(0.25, 2.0)};
    regions.push_back(Region::box(lo, {lo[0] + side[0], lo[1] + side[1]}));
  }
  const SL2Sampler sampler(window.modulus());
  const double density = to_double(window.density());
  const std::size_t k = regions.size();

  std::vector<SiegelRow> rows;
  for (const bool affine : {false, true}) {
    const std::uint64_t key = stream_key(seed, affine ? "homogeneous.siegel.affine" : "homogeneous.siegel.linear");
    std::vector<std::uint32_t> counts(n_samples * k);
    parallel_for(n_samples, jobs, [&](std::size_t i) {
      CounterRng rng(key, i);
      if (affine) {
        const auto g = sample_marked_affine(sampler, rng);
        for (std::size_t j = 0; j < k; ++j) {
          counts[i * k + j] = static_cast<std::uint32_t>(marked_points_in_region(g, window, regions[j]));
        }
      } else {
        const auto g = sample_marked(sampler, rng);
        for (std::size_t j = 0; j < k; ++j) {
          counts[i * k + j] = static_cast<std::uint32_t>(marked_points_in_region(g, window, regions[j]));
        }
      }
    });
    for (std::size_t j = 0; j < k; ++j) {
      MeanAccumulator acc;
      for (std::uint64_t i = 0; i < n_samples; ++i) acc.add(counts[i * k + j]);
      SiegelRow row;
      row.region = std::string(affine ? "affine:" : "linear:") + regions[j].describe();
      row.expected = regions[j].volume() * density;
      row.empirical = acc.mean();
      row.stderr = acc.stderr_of_mean();
      row.zscore = row.stderr > 0 ? (row.empirical - row.expected) / row.stderr : 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace latstat
