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
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace latstat {

using Vec2 = std::array<double, 2>;

// A bounded convex test body in R^2 with closed-form volume.
//
//   cylinder(xi):          0 < x1 < xi, |x2| < 1
//   cone(c, half_width):   c < x1 < 1,  |x2| <= half_width * x1
//   box(lo, hi):           lo <= x <= hi componentwise
//   ball(center, r):       |x - center| <= r
class Region {
 public:
  enum class Kind { kCylinder, kCone, kBox, kBall };

  static Region cylinder(double xi);
  static Region cone(double c, double half_width);
  // The cone whose volume times the window measure equals sigma, i.e.
  // half_width = sigma / ((1 - c^2) * window_measure).
  static Region direction_cone(double c, double sigma, double window_measure);
  static Region box(Vec2 lo, Vec2 hi);
  static Region ball(Vec2 center, double radius);

  Kind kind() const { return kind_; }
  std::string describe() const;
  double volume() const { return volume_; }
  bool contains(Vec2 p) const;

  // max over the region of <p, dir>.
  double support(Vec2 dir) const;

  // Parameter interval {t : origin + t*dir in closure(region)}, or nullopt.
  std::optional<std::pair<double, double>> clip_line(Vec2 origin, Vec2 dir) const;

 private:
  struct HalfPlane {
    Vec2 normal;    // <normal, p> <= offset  (strict when `open`)
    double offset;
    bool open;
  };

  Region() = default;
  void finish_polygon(std::vector<Vec2> vertices, std::vector<HalfPlane> planes);

  Kind kind_ = Kind::kBox;
  std::vector<HalfPlane> planes_;
  std::vector<Vec2> vertices_;
  Vec2 center_{0.0, 0.0};
  double radius_ = 0.0;
  double volume_ = 0.0;
  std::array<double, 4> params_{};
};

}  // namespace latstat
