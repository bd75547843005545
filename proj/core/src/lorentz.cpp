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

#include "latstat/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "latstat/error.hpp"
#include "latstat/parallel.hpp"
#include "latstat/rng.hpp"

namespace latstat {

namespace {

// Visit every integer vector in the box [lo, hi] (inclusive), last
// coordinate fastest.
template <class F>
void for_each_in_box(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi, F&& fn) {
  const std::size_t d = lo.size();
  for (std::size_t i = 0; i < d; ++i) {
    if (lo[i] > hi[i]) return;
  }
  std::vector<std::int64_t> x = lo;
  for (;;) {
    fn(std::span<const std::int64_t>(x));
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (x[i] < hi[i]) {
        ++x[i];
        break;
      }
      x[i] = lo[i];
      if (i == 0) return;
    }
    if (d == 0) return;
  }
}

class SlabWalker {
 public:
  SlabWalker(const ScattererField& field, std::span<const double> q, std::span<const double> v, double t_limit)
      : field_(field), d_(field.dimension()), rho_(field.radius()), t_limit_(t_limit) {
    if (q.size() != d_ || v.size() != d_) throw ConfigError("q and v must have the dimension of the point set");
    long double norm2 = 0;
    for (unsigned i = 0; i < d_; ++i) norm2 += static_cast<long double>(v[i]) * v[i];
    if (std::abs(norm2 - 1.0L) > 1e-9L) throw ConfigError("direction must be a unit vector");
    if (!(t_limit > 0) || !std::isfinite(t_limit)) throw ConfigError("t_max must be positive and finite");
    q_.assign(q.begin(), q.end());
    v_.assign(v.begin(), v.end());
    alpha_ = field.points().alpha.values();
    axis_ = 0;
    for (unsigned i = 1; i < d_; ++i) {
      if (std::abs(v_[i]) > std::abs(v_[axis_])) axis_ = i;
    }
    const long double va = v_[axis_];
    const long double base = q_[axis_] - alpha_[axis_];
    if (va > 0) {
      first_ = static_cast<std::int64_t>(std::ceil(base - rho_)) - 1;
      last_ = static_cast<std::int64_t>(std::floor(base + va * t_limit_ + rho_)) + 1;
      step_ = 1;
    } else {
      first_ = static_cast<std::int64_t>(std::floor(base + rho_)) + 1;
      last_ = static_cast<std::int64_t>(std::ceil(base + va * t_limit_ - rho_)) - 1;
      step_ = -1;
    }
    half_width_.resize(d_);
    for (unsigned i = 0; i < d_; ++i) half_width_[i] = rho_ * (1 + std::abs(v_[i] / va));
  }

  std::int64_t first() const { return first_; }
  bool done(std::int64_t xj) const { return step_ > 0 ? xj > last_ : xj < last_; }
  std::int64_t step() const { return step_; }

  // Lower bound on the first hit time of any ball centred in slab xj.
  long double slab_time_bound(std::int64_t xj) const {
    const long double ts = (xj + alpha_[axis_] - q_[axis_]) / v_[axis_];
    return ts - rho_ / std::abs(v_[axis_]) - rho_;
  }

  // Candidates centred in slab xj (h <= rho, 0 < s <= t_limit), unsorted.
  void collect(std::int64_t xj, std::vector<RayCandidate>& out) const {
    const long double ts = (xj + alpha_[axis_] - q_[axis_]) / v_[axis_];
    std::vector<std::int64_t> lo(d_), hi(d_);
    for (unsigned i = 0; i < d_; ++i) {
      if (i == axis_) {
        lo[i] = hi[i] = xj;
        continue;
      }
      const long double p = q_[i] + ts * v_[i] - alpha_[i];
      lo[i] = static_cast<std::int64_t>(std::ceil(p - half_width_[i] - 1e-9L));
      hi[i] = static_cast<std::int64_t>(std::floor(p + half_width_[i] + 1e-9L));
    }
    std::vector<std::int64_t> m(d_);
    const long double rho2 = static_cast<long double>(rho_) * rho_;
    for_each_in_box(lo, hi, [&](std::span<const std::int64_t> x) {
      long double s = 0;
      std::vector<long double> diff(d_);
      for (unsigned i = 0; i < d_; ++i) {
        diff[i] = (x[i] + alpha_[i]) - q_[i];
        s += diff[i] * v_[i];
      }
      if (!(s > 0) || s > t_limit_) return;
      long double h2 = 0;
      for (unsigned i = 0; i < d_; ++i) {
        const long double e = diff[i] - s * v_[i];
        h2 += e * e;
      }
      if (h2 > rho2) return;
      if (field_.is_excluded(x)) return;
      if (!field_.member(x, m)) return;
      out.push_back(RayCandidate{{x.begin(), x.end()}, m, s, h2});
    });
  }

 private:
  const ScattererField& field_;
  unsigned d_;
  double rho_;
  double t_limit_;
  std::vector<long double> q_, v_, alpha_;
  std::vector<long double> half_width_;
  unsigned axis_ = 0;
  std::int64_t first_ = 0, last_ = 0, step_ = 1;
};

void check_outside(const ScattererField& field, std::span<const double> q) {
  const unsigned d = field.dimension();
  const auto& alpha = field.points().alpha.values();
  const long double rho = field.radius();
  std::vector<std::int64_t> lo(d), hi(d), m(d);
  for (unsigned i = 0; i < d; ++i) {
    lo[i] = static_cast<std::int64_t>(std::floor(q[i] - alpha[i] - rho));
    hi[i] = static_cast<std::int64_t>(std::ceil(q[i] - alpha[i] + rho));
  }
  for_each_in_box(lo, hi, [&](std::span<const std::int64_t> x) {
    long double r2 = 0;
    for (unsigned i = 0; i < d; ++i) {
      const long double e = (x[i] + alpha[i]) - q[i];
      r2 += e * e;
    }
    if (r2 < rho * rho && !field.is_excluded(x) && field.member(x, m)) {
      throw ConfigError("initial point inside scatterer");
    }
  });
}

}  // namespace

ScattererField::ScattererField(PointConfig points, double radius, std::span<const double> q)
    : points_(std::move(points)), radius_(radius), membership_(points_) {
  points_.validate();
  if (points_.exclude_origin && points_.alpha.is_rational()) {
    std::vector<std::int64_t> o;
    for (const auto& a : points_.alpha.exact()) {
      if (a.den != 1) break;
      o.push_back(-a.num);
    }
    if (o.size() == points_.dimension) origin_ = std::move(o);
  }
  if (!(radius > 0) || !(radius < 0.5)) throw ConfigError("scatterer radius must lie in (0, 1/2)");
  if (q.size() != points_.dimension) throw ConfigError("q must have the dimension of the point set");
  const auto& alpha = points_.alpha.values();
  std::vector<std::int64_t> x(points_.dimension), m(points_.dimension);
  for (unsigned i = 0; i < points_.dimension; ++i) {
    const long double y = q[i] - alpha[i];
    const long double r = std::nearbyint(y);
    if (std::abs(y - r) > 1e-12L * std::max(1.0L, std::abs(y))) return;
    x[i] = static_cast<std::int64_t>(r);
  }
  if (member(x, m)) excluded_ = x;
}

bool ScattererField::member(std::span<const std::int64_t> x, std::span<std::int64_t> m) const {
  if (origin_ && std::equal(x.begin(), x.end(), origin_->begin(), origin_->end())) return false;
  return membership_(x, m);
}

bool ScattererField::is_excluded(std::span<const std::int64_t> x) const {
  return excluded_ && std::equal(x.begin(), x.end(), excluded_->begin(), excluded_->end());
}

std::vector<RayCandidate> ray_enumerate(const ScattererField& field, std::span<const double> q,
                                        std::span<const double> v, double t_max) {
  SlabWalker walker(field, q, v, t_max);
  std::vector<RayCandidate> out;
  for (auto xj = walker.first(); !walker.done(xj); xj += walker.step()) walker.collect(xj, out);
  std::stable_sort(out.begin(), out.end(), [](const RayCandidate& a, const RayCandidate& b) {
    if (a.along != b.along) return a.along < b.along;
    return a.position < b.position;
  });
  return out;
}

FlightResult free_path(const ScattererField& field, std::span<const double> q, std::span<const double> v,
                       double t_max) {
  check_outside(field, q);
  const long double rho = field.radius();
  SlabWalker walker(field, q, v, t_max + field.radius());
  FlightResult result;
  long double best = std::numeric_limits<long double>::infinity();
  std::vector<RayCandidate> slab;
  for (auto xj = walker.first(); !walker.done(xj); xj += walker.step()) {
    if (walker.slab_time_bound(xj) > best) break;
    ++result.slabs;
    slab.clear();
    walker.collect(xj, slab);
    for (auto& c : slab) {
      const long double t = c.along - std::sqrt(std::max(0.0L, rho * rho - c.perp2));
      if (!(t > 0) || t > t_max) continue;
      if (t < best || (t == best && c.position < result.hit_position)) {
        best = t;
        result.hit = true;
        result.hit_point = std::move(c.window_coords);
        result.hit_position = std::move(c.position);
      }
    }
  }
  result.tau = result.hit ? static_cast<double>(best) : t_max;
  return result;
}

std::vector<FplCurve> fpl_distribution(const PointConfig& points, std::span<const double> q,
                                       const std::vector<double>& rhos, const std::vector<double>& xi_grid,
                                       std::uint64_t n_dirs, const LambdaSpec& lambda, std::uint64_t seed,
                                       unsigned jobs) {
  const unsigned d = points.dimension;
  if (xi_grid.empty()) throw ConfigError("xi grid must not be empty");
  for (std::size_t i = 1; i < xi_grid.size(); ++i) {
    if (!(xi_grid[i] > xi_grid[i - 1])) throw ConfigError("xi grid must be increasing");
  }
  if (n_dirs == 0) throw ConfigError("number of directions must be positive");
  if (!lambda.angular_weights.empty()) {
    if (d != 2) throw UnsupportedError("non-uniform direction densities are implemented for d = 2");
    if (std::any_of(lambda.angular_weights.begin(), lambda.angular_weights.end(), [](double w) { return w < 0; }) ||
        std::all_of(lambda.angular_weights.begin(), lambda.angular_weights.end(), [](double w) { return w == 0; })) {
      throw ConfigError("angular weights must be non-negative and not all zero");
    }
  }
  const double wmax = lambda.angular_weights.empty()
                          ? 1.0
                          : *std::max_element(lambda.angular_weights.begin(), lambda.angular_weights.end());

  // Directions are shared by all radii.
  const std::uint64_t key = stream_key(seed, "lorentz.directions");
  std::vector<double> dirs(n_dirs * d);
  parallel_for(n_dirs, jobs, [&](std::size_t i) {
    CounterRng rng(key, i);
    double* v = dirs.data() + i * d;
    if (d == 2) {
      double turns = rng.uniform();
      if (!lambda.angular_weights.empty()) {
        const auto bins = lambda.angular_weights.size();
        for (;;) {
          const auto bin = std::min(bins - 1, static_cast<std::size_t>(turns * bins));
          if (rng.uniform() * wmax < lambda.angular_weights[bin]) break;
          turns = rng.uniform();
        }
      }
      const double theta = 2 * std::numbers::pi * turns;
      v[0] = std::cos(theta);
      v[1] = std::sin(theta);
    } else {
      double norm = 0.0;
      do {
        norm = 0.0;
        for (unsigned k = 0; k < d; ++k) {
          v[k] = rng.normal();
          norm += v[k] * v[k];
        }
      } while (norm < 1e-300);
      norm = std::sqrt(norm);
      for (unsigned k = 0; k < d; ++k) v[k] /= norm;
    }
  });

  std::vector<FplCurve> curves;
  const double xi_max = xi_grid.back();
  for (double rho : rhos) {
    const ScattererField field(points, rho, q);
    const double scale = std::pow(rho, static_cast<double>(d) - 1);
    const double t_max = (xi_max + 1) / scale;
    check_outside(field, q);
    std::vector<double> values(n_dirs);
    parallel_for(n_dirs, jobs, [&](std::size_t i) {
      const auto r = free_path(field, q, std::span<const double>(dirs.data() + i * d, d), t_max);
      values[i] = r.hit ? scale * r.tau : std::numeric_limits<double>::infinity();
    });
    FplCurve curve;
    curve.rho = rho;
    curve.scaled_paths = EmpiricalDistribution::from_sample(std::move(values));
    curve.censored_fraction = static_cast<double>(curve.scaled_paths.censored()) / static_cast<double>(n_dirs);
    curve.xi = xi_grid;
    for (double xi : xi_grid) {
      const double s = curve.scaled_paths.survival(xi);
      curve.survival.push_back(s);
      curve.stderr.push_back(binomial_stderr(s, n_dirs));
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace latstat
