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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latstat/rational.hpp"
#include "latstat/window.hpp"

namespace latstat {

// Real shift alpha. Rationality is a declared property of the configuration:
// a shift is rational exactly when every component was given as an exact
// fraction, and is never inferred from floating-point values. Irrational
// components are carried as 64-bit-mantissa long doubles.
class Shift {
 public:
  Shift() = default;
  static Shift zero(unsigned dimension);
  static Shift rational(std::vector<Fraction> components);
  static Shift irrational(std::vector<long double> values, std::vector<std::string> labels);
  // Components: "1/2", "3", "0.25" (rational) or "sqrt2", "sqrt(3)", "pi",
  // "e", "golden", "irrational:<decimal>" (irrational). A single irrational
  // component makes the whole shift irrational.
  static Shift parse(const std::vector<std::string>& components);

  unsigned dimension() const { return static_cast<unsigned>(values_.size()); }
  bool is_rational() const { return rational_; }
  const std::vector<long double>& values() const { return values_; }
  const std::vector<Fraction>& exact() const { return exact_; }
  const std::vector<std::string>& labels() const { return labels_; }
  // lcm of the component denominators (rational shifts only).
  std::int64_t common_denominator() const;
  Shift negated() const;
  std::string describe() const;

 private:
  std::vector<long double> values_;
  std::vector<Fraction> exact_;
  std::vector<std::string> labels_;
  bool rational_ = true;
};

// A realized point set {x + alpha : x = m B, m in Z^d, m in W} restricted to
// the annulus c T <= |x + alpha| < T.
struct PointConfig {
  unsigned dimension = 2;
  CongruenceWindow window = CongruenceWindow::trivial(2);
  Shift alpha = Shift::zero(2);
  std::vector<std::int64_t> basis;  // d*d row-major unimodular; empty = identity
  double c = 0.0;
  double T = 1.0;
  bool exclude_origin = true;

  void validate() const;
  std::string canonical_string() const;
  std::uint64_t hash() const;
};

struct PointBatch {
  unsigned dimension = 2;
  std::vector<double> coords;  // count * dimension, canonical (lexicographic in m) order
  std::size_t count = 0;
  std::uint64_t config_hash = 0;
  double wall_seconds = 0.0;
  std::uint64_t peak_rss_kb = 0;
  double slack = 0.0;  // numerical slack used in annulus tests (0 when exact)
  double T = 0.0;
  double c = 0.0;

  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dimension, dimension};
  }
};

// Window membership of integer positions x: tests m = x B^{-1}.
class MembershipTest {
 public:
  explicit MembershipTest(const PointConfig& cfg);
  // Writes the window coordinates of x into m (size d) and tests them.
  bool operator()(std::span<const std::int64_t> x, std::span<std::int64_t> m) const;

 private:
  CongruenceWindow window_;
  unsigned d_;
  std::vector<std::int64_t> inverse_;  // empty: identity basis
};

// Visit every lattice point of the annulus, ignoring the window.
// `m` are the window coordinates, `y = m B + alpha` the position.
using AnnulusVisitor = std::function<void(std::span<const std::int64_t> m, std::span<const long double> y)>;

inline constexpr double kMaxEnumeratedPoints = 1e8;

double annulus_volume(unsigned dimension, double c, double T);
double unit_ball_volume(unsigned dimension);

// Sequential scan in canonical order (lexicographic in x = mB).
void for_each_annulus_point(const PointConfig& cfg, const AnnulusVisitor& visit);

PointBatch enumerate(const PointConfig& cfg, unsigned jobs = 1);

std::uint64_t count_points(const PointConfig& cfg, unsigned jobs = 1);

struct DensitySample {
  double T;
  std::uint64_t count;
  double ratio;  // count / vol(annulus)
};
// One scan at max(T_list) serves every radius.
std::vector<DensitySample> density_ratio(const PointConfig& cfg, const std::vector<double>& T_list,
                                         unsigned jobs = 1);

struct TruncationExcess {
  std::uint64_t excess_count;
  double excess_density;
  std::uint64_t exact_count;
  std::uint64_t truncated_count;
};
// Counts points accepted by the truncated window but not the exact one.
// Throws ConfigError when the windows are not nested on the scanned points.
TruncationExcess truncation_excess(const PointConfig& exact_cfg, const PointConfig& truncated_cfg, double T,
                                   unsigned jobs = 1);

}  // namespace latstat
