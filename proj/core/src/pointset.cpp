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

#include "latstat/pointset.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "latstat/error.hpp"
#include "latstat/parallel.hpp"
#include "latstat/primes.hpp"
#include "latstat/rng.hpp"

namespace latstat {

// ---------------------------------------------------------------- Shift

Shift Shift::zero(unsigned dimension) {
  return rational(std::vector<Fraction>(dimension, Fraction{0, 1}));
}

Shift Shift::rational(std::vector<Fraction> components) {
  Shift s;
  s.rational_ = true;
  for (const Fraction& f : components) {
    s.values_.push_back(f.value());
    s.labels_.push_back(f.den == 1 ? std::to_string(f.num) : std::to_string(f.num) + "/" + std::to_string(f.den));
  }
  s.exact_ = std::move(components);
  return s;
}

Shift Shift::irrational(std::vector<long double> values, std::vector<std::string> labels) {
  if (labels.size() != values.size()) throw ConfigError("irrational shift needs one label per component");
  Shift s;
  s.rational_ = false;
  s.values_ = std::move(values);
  s.labels_ = std::move(labels);
  return s;
}

namespace {

// Returns true and sets `value` for a recognised irrational token.
bool parse_irrational(const std::string& token, long double& value) {
  std::string t;
  for (char ch : token) {
    if (ch != ' ' && ch != '(' && ch != ')') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (t.rfind("irrational:", 0) == 0) {
    const std::string num = t.substr(11);
    std::size_t used = 0;
    value = std::stold(num, &used);
    if (used != num.size()) throw ConfigError("bad irrational decimal '" + token + "'");
    return true;
  }
  if (t == "pi") {
    value = std::numbers::pi_v<long double>;
    return true;
  }
  if (t == "e") {
    value = std::numbers::e_v<long double>;
    return true;
  }
  if (t == "golden" || t == "phi") {
    value = std::numbers::phi_v<long double>;
    return true;
  }
  bool negative = false;
  if (!t.empty() && t.front() == '-') {
    negative = true;
    t.erase(0, 1);
  }
  if (t.rfind("sqrt", 0) == 0) {
    const std::string arg = t.substr(4);
    const Fraction f = Fraction::parse(arg);
    if (f.num < 0) throw ConfigError("sqrt of a negative number in shift '" + token + "'");
    const long double r = std::sqrt(f.value());
    if (r * r == f.value() && std::floor(r) == r) {
      throw ConfigError("'" + token + "' is rational; write it as a fraction");
    }
    value = negative ? -r : r;
    return true;
  }
  return false;
}

}  // namespace

Shift Shift::parse(const std::vector<std::string>& components) {
  std::vector<long double> values;
  std::vector<Fraction> exact;
  bool rational = true;
  for (const std::string& c : components) {
    long double v = 0;
    if (parse_irrational(c, v)) {
      rational = false;
      values.push_back(v);
      exact.push_back({0, 1});
    } else {
      const Fraction f = Fraction::parse(c);
      exact.push_back(f);
      values.push_back(f.value());
    }
  }
  if (rational) return Shift::rational(std::move(exact));
  return Shift::irrational(std::move(values), components);
}

std::int64_t Shift::common_denominator() const {
  std::int64_t d = 1;
  for (const Fraction& f : exact_) d = std::lcm(d, f.den);
  return d;
}

Shift Shift::negated() const {
  Shift s = *this;
  for (auto& v : s.values_) v = -v;
  for (auto& f : s.exact_) f = -f;
  for (auto& l : s.labels_) l = (l.rfind('-', 0) == 0) ? l.substr(1) : "-" + l;
  return s;
}

std::string Shift::describe() const {
  std::string out = "(";
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i) out += ",";
    out += labels_[i];
  }
  return out + ")";
}

// ---------------------------------------------------------------- PointConfig

namespace {

std::vector<std::int64_t> integer_inverse(const std::vector<std::int64_t>& b, unsigned d) {
  std::vector<Rational> a(d * 2 * d);
  for (unsigned i = 0; i < d; ++i) {
    for (unsigned j = 0; j < d; ++j) a[i * 2 * d + j] = b[i * d + j];
    a[i * 2 * d + d + i] = 1;
  }
  for (unsigned col = 0; col < d; ++col) {
    unsigned piv = col;
    while (piv < d && a[piv * 2 * d + col] == 0) ++piv;
    if (piv == d) throw ConfigError("basis matrix is singular");
    if (piv != col) {
      for (unsigned j = 0; j < 2 * d; ++j) std::swap(a[piv * 2 * d + j], a[col * 2 * d + j]);
    }
    const Rational inv = 1 / a[col * 2 * d + col];
    for (unsigned j = 0; j < 2 * d; ++j) a[col * 2 * d + j] *= inv;
    for (unsigned i = 0; i < d; ++i) {
      if (i == col || a[i * 2 * d + col] == 0) continue;
      const Rational f = a[i * 2 * d + col];
      for (unsigned j = 0; j < 2 * d; ++j) a[i * 2 * d + j] -= f * a[col * 2 * d + j];
    }
  }
  std::vector<std::int64_t> out(d * d);
  for (unsigned i = 0; i < d; ++i) {
    for (unsigned j = 0; j < d; ++j) {
      const Rational& v = a[i * 2 * d + d + j];
      if (boost::multiprecision::denominator(v) != 1) throw ConfigError("basis matrix is not unimodular");
      out[i * d + j] = boost::multiprecision::numerator(v).convert_to<std::int64_t>();
    }
  }
  return out;
}

}  // namespace

void PointConfig::validate() const {
  if (dimension < 2) throw ConfigError("dimension must be >= 2");
  if (window.dimension() != dimension) throw ConfigError("window dimension does not match point set dimension");
  if (alpha.dimension() != dimension) throw ConfigError("shift dimension does not match point set dimension");
  if (!(c >= 0.0 && c < 1.0)) throw ConfigError("annulus parameter c must satisfy 0 <= c < 1");
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("annulus radius T must be positive and finite");
  if (!basis.empty()) {
    if (basis.size() != static_cast<std::size_t>(dimension) * dimension) {
      throw ConfigError("basis must be a d x d matrix");
    }
    integer_inverse(basis, dimension);  // throws unless det = +-1
  }
}

std::string PointConfig::canonical_string() const {
  std::ostringstream os;
  os.precision(21);
  os << "d=" << dimension << ";family=" << to_string(window.family().kind) << ";exact=" << window.exact_tail();
  os << ";kfree=";
  for (unsigned k : window.family().kfree_exponents) os << k << ",";
  os << ";conditions=";
  for (const auto& cond : window.conditions()) {
    os << cond.prime() << "^" << cond.exponent() << ":" << static_cast<int>(cond.mode()) << ",";
  }
  os << ";alpha=" << alpha.describe() << (alpha.is_rational() ? "Q" : "R");
  for (long double v : alpha.values()) os << "," << v;
  os << ";basis=";
  for (auto b : basis) os << b << ",";
  os << ";c=" << c << ";T=" << T << ";origin=" << exclude_origin;
  return os.str();
}

std::uint64_t PointConfig::hash() const { return splitmix64(fnv1a64(canonical_string())); }

double unit_ball_volume(unsigned d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double annulus_volume(unsigned d, double c, double T) {
  return unit_ball_volume(d) * std::pow(T, d) * (1.0 - std::pow(c, d));
}

MembershipTest::MembershipTest(const PointConfig& cfg) : window_(cfg.window), d_(cfg.dimension) {
  if (!cfg.basis.empty()) {
    bool identity = true;
    for (unsigned i = 0; i < d_; ++i) {
      for (unsigned j = 0; j < d_; ++j) identity &= cfg.basis[i * d_ + j] == (i == j ? 1 : 0);
    }
    if (!identity) inverse_ = integer_inverse(cfg.basis, d_);
  }
}

bool MembershipTest::operator()(std::span<const std::int64_t> x, std::span<std::int64_t> m) const {
  if (inverse_.empty()) {
    std::copy(x.begin(), x.end(), m.begin());
  } else {
    for (unsigned j = 0; j < d_; ++j) {
      std::int64_t s = 0;
      for (unsigned i = 0; i < d_; ++i) s += x[i] * inverse_[i * d_ + j];
      m[j] = s;
    }
  }
  return window_.contains(m);
}

// ---------------------------------------------------------------- scanning

namespace {

class AnnulusScanner {
 public:
  explicit AnnulusScanner(const PointConfig& cfg) : d_(cfg.dimension), exclude_origin_(cfg.exclude_origin) {
    cfg.validate();
    alpha_ = cfg.alpha.values();
    rational_ = cfg.alpha.is_rational();
    if (rational_) {
      den_ = cfg.alpha.common_denominator();
      for (const Fraction& f : cfg.alpha.exact()) scaled_alpha_.push_back(f.num * (den_ / f.den));
      const long double D = static_cast<long double>(den_);
      outer2_ = (D * cfg.T) * (D * cfg.T);
      inner2_ = (D * cfg.c * cfg.T) * (D * cfg.c * cfg.T);
    } else {
      outer2_ = static_cast<long double>(cfg.T) * cfg.T;
      inner2_ = static_cast<long double>(cfg.c * cfg.T) * (cfg.c * cfg.T);
    }
    T_ = cfg.T;
    if (!cfg.basis.empty()) {
      bool identity = true;
      for (unsigned i = 0; i < d_; ++i) {
        for (unsigned j = 0; j < d_; ++j) identity &= cfg.basis[i * d_ + j] == (i == j ? 1 : 0);
      }
      if (!identity) inverse_ = integer_inverse(cfg.basis, d_);
    }
  }

  unsigned dimension() const { return d_; }
  bool identity_basis() const { return inverse_.empty(); }

  std::vector<std::int64_t> rows() const {
    const auto lo = static_cast<std::int64_t>(std::floor(-T_ - alpha_[0])) - 1;
    const auto hi = static_cast<std::int64_t>(std::ceil(T_ - alpha_[0])) + 1;
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t x = lo; x <= hi; ++x) out.push_back(x);
    return out;
  }

  // Visit the annulus points whose first coordinate is x0, lexicographically.
  template <class Fn>
  void scan_row(std::int64_t x0, Fn&& fn) const {
    std::vector<std::int64_t> x(d_), m(d_);
    std::vector<long double> y(d_);
    x[0] = x0;
    y[0] = x0 + alpha_[0];
    recurse(1, y[0] * y[0], x, m, y, fn);
  }

 private:
  template <class Fn>
  void recurse(unsigned i, long double partial, std::vector<std::int64_t>& x, std::vector<std::int64_t>& m,
               std::vector<long double>& y, Fn& fn) const {
    const long double T2 = static_cast<long double>(T_) * T_;
    if (partial >= T2 * (1.0L + 1e-15L) + 1e-12L) return;
    if (i == d_) {
      if (!accept(x)) return;
      to_window_coords(x, m);
      fn(std::span<const std::int64_t>(m), std::span<const long double>(y));
      return;
    }
    const long double rem = std::sqrt(std::max(0.0L, T2 - partial));
    const auto lo = static_cast<std::int64_t>(std::floor(-rem - alpha_[i])) - 1;
    const auto hi = static_cast<std::int64_t>(std::ceil(rem - alpha_[i])) + 1;
    for (std::int64_t xi = lo; xi <= hi; ++xi) {
      x[i] = xi;
      y[i] = xi + alpha_[i];
      recurse(i + 1, partial + y[i] * y[i], x, m, y, fn);
    }
  }

  bool accept(const std::vector<std::int64_t>& x) const {
    long double n2 = 0;
    bool zero = true;
    if (rational_) {
      int128 acc = 0;
      for (unsigned i = 0; i < d_; ++i) {
        const int128 v = static_cast<int128>(den_) * x[i] + scaled_alpha_[i];
        zero &= v == 0;
        acc += v * v;
      }
      n2 = static_cast<long double>(acc);
    } else {
      for (unsigned i = 0; i < d_; ++i) {
        const long double v = x[i] + alpha_[i];
        zero &= v == 0;
        n2 += v * v;
      }
    }
    if (!(n2 < outer2_) || n2 < inner2_) return false;
    return !(zero && exclude_origin_);
  }

  void to_window_coords(const std::vector<std::int64_t>& x, std::vector<std::int64_t>& m) const {
    if (inverse_.empty()) {
      m = x;
      return;
    }
    for (unsigned j = 0; j < d_; ++j) {
      std::int64_t s = 0;
      for (unsigned i = 0; i < d_; ++i) s += x[i] * inverse_[i * d_ + j];
      m[j] = s;
    }
  }

  unsigned d_;
  bool exclude_origin_;
  std::vector<long double> alpha_;
  bool rational_ = true;
  std::int64_t den_ = 1;
  std::vector<std::int64_t> scaled_alpha_;
  long double outer2_ = 0, inner2_ = 0;
  double T_ = 1;
  std::vector<std::int64_t> inverse_;
};

std::uint64_t peak_rss_kb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<std::uint64_t>(usage.ru_maxrss);
}

double expected_count(const PointConfig& cfg) {
  double m = 1.0;
  try {
    m = window_measure(cfg.window).value;
  } catch (const UnsupportedError&) {
    m = to_double(window_measure(CongruenceWindow::custom(cfg.dimension, cfg.window.conditions())).finite_level);
  }
  return m * annulus_volume(cfg.dimension, cfg.c, cfg.T);
}

}  // namespace

void for_each_annulus_point(const PointConfig& cfg, const AnnulusVisitor& visit) {
  const AnnulusScanner scanner(cfg);
  for (std::int64_t x0 : scanner.rows()) scanner.scan_row(x0, visit);
}

PointBatch enumerate(const PointConfig& cfg, unsigned jobs) {
  const auto start = std::chrono::steady_clock::now();
  const AnnulusScanner scanner(cfg);
  const double expected = expected_count(cfg);
  if (expected > kMaxEnumeratedPoints) {
    std::ostringstream os;
    os << "refusing to enumerate about " << static_cast<std::uint64_t>(expected) << " points (limit "
       << static_cast<std::uint64_t>(kMaxEnumeratedPoints) << "); lower T";
    throw ResourceLimitError(os.str());
  }
  const unsigned d = cfg.dimension;
  const auto rows = scanner.rows();
  std::vector<std::vector<double>> row_points(rows.size());
  std::vector<std::vector<std::int64_t>> row_keys(rows.size());
  const bool sort_by_m = !scanner.identity_basis();
  parallel_for(rows.size(), jobs, [&](std::size_t r) {
    scanner.scan_row(rows[r], [&](std::span<const std::int64_t> m, std::span<const long double> y) {
      if (!cfg.window.contains(m)) return;
      for (long double v : y) row_points[r].push_back(static_cast<double>(v));
      if (sort_by_m) row_keys[r].insert(row_keys[r].end(), m.begin(), m.end());
    });
  });

  PointBatch batch;
  batch.dimension = d;
  std::size_t total = 0;
  for (const auto& rp : row_points) total += rp.size();
  batch.coords.reserve(total);
  for (const auto& rp : row_points) batch.coords.insert(batch.coords.end(), rp.begin(), rp.end());
  batch.count = total / d;

  if (sort_by_m) {
    std::vector<std::int64_t> keys;
    keys.reserve(total);
    for (const auto& rk : row_keys) keys.insert(keys.end(), rk.begin(), rk.end());
    std::vector<std::size_t> order(batch.count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(keys.begin() + a * d, keys.begin() + (a + 1) * d, keys.begin() + b * d,
                                          keys.begin() + (b + 1) * d);
    });
    std::vector<double> sorted(total);
    for (std::size_t i = 0; i < batch.count; ++i) {
      std::copy_n(batch.coords.begin() + order[i] * d, d, sorted.begin() + i * d);
    }
    batch.coords = std::move(sorted);
  }

  batch.config_hash = cfg.hash();
  batch.T = cfg.T;
  batch.c = cfg.c;
  batch.slack = cfg.alpha.is_rational() ? 0.0 : 1e-12 * cfg.T;
  batch.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  batch.peak_rss_kb = peak_rss_kb();
  return batch;
}

std::uint64_t count_points(const PointConfig& cfg, unsigned jobs) {
  const AnnulusScanner scanner(cfg);
  const auto rows = scanner.rows();
  std::vector<std::uint64_t> counts(rows.size(), 0);
  parallel_for(rows.size(), jobs, [&](std::size_t r) {
    scanner.scan_row(rows[r], [&](std::span<const std::int64_t> m, std::span<const long double>) {
      if (cfg.window.contains(m)) ++counts[r];
    });
  });
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<DensitySample> density_ratio(const PointConfig& cfg, const std::vector<double>& T_list, unsigned jobs) {
  if (T_list.empty()) return {};
  for (std::size_t i = 1; i < T_list.size(); ++i) {
    if (!(T_list[i] > T_list[i - 1])) throw ConfigError("density_ratio needs an increasing list of radii");
  }
  PointConfig outer = cfg;
  outer.T = T_list.back();
  outer.c = 0.0;
  const AnnulusScanner scanner(outer);
  const auto rows = scanner.rows();
  const std::size_t k = T_list.size();

  std::vector<long double> lo2(k), hi2(k);
  const long double D = cfg.alpha.is_rational() ? static_cast<long double>(cfg.alpha.common_denominator()) : 1.0L;
  for (std::size_t i = 0; i < k; ++i) {
    hi2[i] = (D * T_list[i]) * (D * T_list[i]);
    lo2[i] = (D * cfg.c * T_list[i]) * (D * cfg.c * T_list[i]);
  }
  std::vector<std::int64_t> scaled_alpha;
  if (cfg.alpha.is_rational()) {
    for (const Fraction& f : cfg.alpha.exact()) {
      scaled_alpha.push_back(f.num * (cfg.alpha.common_denominator() / f.den));
    }
  }
  std::vector<std::vector<std::uint64_t>> counts(rows.size(), std::vector<std::uint64_t>(k, 0));
  parallel_for(rows.size(), jobs, [&](std::size_t r) {
    scanner.scan_row(rows[r], [&](std::span<const std::int64_t> m, std::span<const long double> y) {
      if (!cfg.window.contains(m)) return;
      long double n2 = 0;
      if (cfg.alpha.is_rational()) {
        int128 acc = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
          // y * D is an exact integer for rational shifts.
          const auto v = static_cast<int128>(std::llround(y[i] * D));
          acc += v * v;
        }
        n2 = static_cast<long double>(acc);
      } else {
        for (long double v : y) n2 += v * v;
      }
      for (std::size_t i = 0; i < k; ++i) {
        if (n2 < hi2[i] && n2 >= lo2[i]) ++counts[r][i];
      }
    });
  });
  std::vector<DensitySample> out;
  for (std::size_t i = 0; i < k; ++i) {
    std::uint64_t total = 0;
    for (const auto& row : counts) total += row[i];
    out.push_back({T_list[i], total, static_cast<double>(total) / annulus_volume(cfg.dimension, cfg.c, T_list[i])});
  }
  return out;
}

TruncationExcess truncation_excess(const PointConfig& exact_cfg, const PointConfig& truncated_cfg, double T,
                                   unsigned jobs) {
  if (exact_cfg.dimension != truncated_cfg.dimension) throw ConfigError("configs differ in dimension");
  if (exact_cfg.alpha.values() != truncated_cfg.alpha.values() ||
      exact_cfg.alpha.is_rational() != truncated_cfg.alpha.is_rational()) {
    throw ConfigError("configs differ in shift");
  }
  if (exact_cfg.basis != truncated_cfg.basis) throw ConfigError("configs differ in basis");
  PointConfig scan_cfg = exact_cfg;
  scan_cfg.T = T;
  const AnnulusScanner scanner(scan_cfg);
  const auto rows = scanner.rows();
  struct RowTally {
    std::uint64_t exact = 0, truncated = 0, excess = 0, violations = 0;
  };
  std::vector<RowTally> tally(rows.size());
  parallel_for(rows.size(), jobs, [&](std::size_t r) {
    scanner.scan_row(rows[r], [&](std::span<const std::int64_t> m, std::span<const long double>) {
      const bool in_exact = exact_cfg.window.contains(m);
      const bool in_trunc = truncated_cfg.window.contains(m);
      tally[r].exact += in_exact;
      tally[r].truncated += in_trunc;
      if (in_trunc && !in_exact) ++tally[r].excess;
      if (in_exact && !in_trunc) ++tally[r].violations;
    });
  });
  RowTally sum;
  for (const auto& t : tally) {
    sum.exact += t.exact;
    sum.truncated += t.truncated;
    sum.excess += t.excess;
    sum.violations += t.violations;
  }
  if (sum.violations > 0) {
    throw ConfigError("windows are not nested: " + std::to_string(sum.violations) +
                      " points accepted by the exact window are rejected by the truncated one");
  }
  return {sum.excess, static_cast<double>(sum.excess) / annulus_volume(scan_cfg.dimension, scan_cfg.c, T), sum.exact,
          sum.truncated};
}

}  // namespace latstat
