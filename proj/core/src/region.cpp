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

#include "latstat/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "latstat/error.hpp"

namespace latstat {

void Region::finish_polygon(std::vector<Vec2> vertices, std::vector<HalfPlane> planes) {
  vertices_ = std::move(vertices);
  planes_ = std::move(planes);
  double area = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % vertices_.size()];
    area += a[0] * b[1] - a[1] * b[0];
  }
  volume_ = std::abs(area) / 2.0;
}

Region Region::cylinder(double xi) {
  if (!(xi >= 0.0)) throw ConfigError("cylinder length must be >= 0");
  Region r;
  r.kind_ = Kind::kCylinder;
  r.params_ = {xi, 0, 0, 0};
  r.finish_polygon({{0.0, -1.0}, {xi, -1.0}, {xi, 1.0}, {0.0, 1.0}},
                   {{{-1.0, 0.0}, 0.0, true},
                    {{1.0, 0.0}, xi, true},
                    {{0.0, -1.0}, 1.0, true},
                    {{0.0, 1.0}, 1.0, true}});
  r.volume_ = 2.0 * xi;
  return r;
}

Region Region::cone(double c, double half_width) {
  if (!(c >= 0.0 && c < 1.0)) throw ConfigError("cone needs 0 <= c < 1");
  if (!(half_width >= 0.0)) throw ConfigError("cone half width must be >= 0");
  Region r;
  r.kind_ = Kind::kCone;
  r.params_ = {c, half_width, 0, 0};
  const double s = half_width;
  r.finish_polygon({{c, -s * c}, {1.0, -s}, {1.0, s}, {c, s * c}},
                   {{{-1.0, 0.0}, -c, true},
                    {{1.0, 0.0}, 1.0, true},
                    {{-s, 1.0}, 0.0, false},
                    {{-s, -1.0}, 0.0, false}});
  r.volume_ = s * (1.0 - c * c);
  return r;
}

Region Region::direction_cone(double c, double sigma, double window_measure) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(window_measure > 0.0)) throw ConfigError("window measure must be positive");
  if (!(c >= 0.0 && c < 1.0)) throw ConfigError("cone needs 0 <= c < 1");
  return cone(c, sigma / ((1.0 - c * c) * window_measure));
}

Region Region::box(Vec2 lo, Vec2 hi) {
  if (!(lo[0] <= hi[0] && lo[1] <= hi[1])) throw ConfigError("box corners out of order");
  Region r;
  r.kind_ = Kind::kBox;
  r.params_ = {lo[0], lo[1], hi[0], hi[1]};
  r.finish_polygon({{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}},
                   {{{-1.0, 0.0}, -lo[0], false},
                    {{1.0, 0.0}, hi[0], false},
                    {{0.0, -1.0}, -lo[1], false},
                    {{0.0, 1.0}, hi[1], false}});
  return r;
}

Region Region::ball(Vec2 center, double radius) {
  if (!(radius >= 0.0)) throw ConfigError("ball radius must be >= 0");
  Region r;
  r.kind_ = Kind::kBall;
  r.center_ = center;
  r.radius_ = radius;
  r.params_ = {center[0], center[1], radius, 0};
  r.volume_ = std::numbers::pi * radius * radius;
  return r;
}

std::string Region::describe() const {
  std::ostringstream os;
  os.precision(6);
  switch (kind_) {
    case Kind::kCylinder: os << "cylinder(xi=" << params_[0] << ")"; break;
    case Kind::kCone: os << "cone(c=" << params_[0] << ";half_width=" << params_[1] << ")"; break;
    case Kind::kBox:
      os << "box[" << params_[0] << ";" << params_[2] << "]x[" << params_[1] << ";" << params_[3] << "]";
      break;
    case Kind::kBall: os << "ball(r=" << radius_ << ")"; break;
  }
  return os.str();
}

bool Region::contains(Vec2 p) const {
  if (kind_ == Kind::kBall) {
    const double dx = p[0] - center_[0];
    const double dy = p[1] - center_[1];
    return dx * dx + dy * dy <= radius_ * radius_;
  }
  for (const auto& h : planes_) {
    const double v = h.normal[0] * p[0] + h.normal[1] * p[1];
    if (h.open ? !(v < h.offset) : !(v <= h.offset)) return false;
  }
  return true;
}

double Region::support(Vec2 dir) const {
  if (kind_ == Kind::kBall) {
    return center_[0] * dir[0] + center_[1] * dir[1] + radius_ * std::hypot(dir[0], dir[1]);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices_) best = std::max(best, v[0] * dir[0] + v[1] * dir[1]);
  return best;
}

std::optional<std::pair<double, double>> Region::clip_line(Vec2 origin, Vec2 dir) const {
  if (kind_ == Kind::kBall) {
    const double ox = origin[0] - center_[0];
    const double oy = origin[1] - center_[1];
    const double a = dir[0] * dir[0] + dir[1] * dir[1];
    const double b = ox * dir[0] + oy * dir[1];
    const double c = ox * ox + oy * oy - radius_ * radius_;
    if (a == 0.0) {
      if (c <= 0.0) return std::pair{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
      return std::nullopt;
    }
    const double disc = b * b - a * c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    return std::pair{(-b - sq) / a, (-b + sq) / a};
  }
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& h : planes_) {
    const double nd = h.normal[0] * dir[0] + h.normal[1] * dir[1];
    const double no = h.normal[0] * origin[0] + h.normal[1] * origin[1];
    if (nd == 0.0) {
      if (no > h.offset) return std::nullopt;
      continue;
    }
    const double t = (h.offset - no) / nd;
    if (nd > 0.0) {
      hi = std::min(hi, t);
    } else {
      lo = std::max(lo, t);
    }
  }
  if (lo > hi) return std::nullopt;
  return std::pair{lo, hi};
}

}  // namespace latstat
