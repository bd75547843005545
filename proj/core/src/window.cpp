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

#include "latstat/window.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "latstat/error.hpp"
#include "latstat/primes.hpp"

namespace latstat {

namespace {

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (r > (std::uint64_t{1} << 62) / base) throw ResourceLimitError("prime power overflows 64 bits");
    r *= base;
  }
  return r;
}

// N^d, or 0 when it exceeds 2^32.
std::uint64_t table_entries(std::uint64_t modulus, unsigned dimension) {
  std::uint64_t e = 1;
  for (unsigned i = 0; i < dimension; ++i) {
    if (modulus != 0 && e > ResidueWindow::kMaxEntries / modulus) return 0;
    e *= modulus;
  }
  return e <= ResidueWindow::kMaxEntries ? e : 0;
}

}  // namespace

// ---------------------------------------------------------------- LocalCondition

LocalCondition LocalCondition::full_sublattice(std::uint64_t p, unsigned k) {
  if (!is_prime(p)) throw ConfigError("local condition prime " + std::to_string(p) + " is not prime");
  if (k == 0) throw ConfigError("local condition exponent must be >= 1");
  LocalCondition c;
  c.p_ = p;
  c.k_ = k;
  c.modulus_ = checked_pow(p, k);
  c.mode_ = ConditionMode::kFullSublattice;
  return c;
}

LocalCondition LocalCondition::per_coordinate_kfree(std::uint64_t p, std::vector<unsigned> exponents) {
  if (!is_prime(p)) throw ConfigError("local condition prime " + std::to_string(p) + " is not prime");
  const unsigned k = exponents.empty() ? 0 : *std::max_element(exponents.begin(), exponents.end());
  if (k == 0) throw ConfigError("k-free condition needs at least one constrained coordinate");
  LocalCondition c;
  c.p_ = p;
  c.k_ = k;
  c.modulus_ = checked_pow(p, k);
  c.mode_ = ConditionMode::kPerCoordinateKFree;
  c.coord_exponents_ = std::move(exponents);
  return c;
}

LocalCondition LocalCondition::explicit_residues(std::uint64_t p, unsigned k, unsigned dimension,
                                                 const std::vector<std::vector<std::int64_t>>& residues) {
  if (!is_prime(p)) throw ConfigError("local condition prime " + std::to_string(p) + " is not prime");
  if (k == 0) throw ConfigError("local condition exponent must be >= 1");
  if (dimension == 0) throw ConfigError("dimension must be >= 1");
  LocalCondition c;
  c.p_ = p;
  c.k_ = k;
  c.modulus_ = checked_pow(p, k);
  c.mode_ = ConditionMode::kExplicitResidues;
  c.dimension_ = dimension;
  if (table_entries(c.modulus_, dimension) == 0) {
    throw ResourceLimitError("explicit residue table (p^k)^d exceeds 2^32 entries");
  }
  std::set<std::uint64_t> idx;
  for (const auto& r : residues) {
    if (r.size() != dimension) throw ConfigError("explicit residue has wrong dimension");
    std::uint64_t i = 0;
    for (std::int64_t x : r) {
      if (x < 0 || static_cast<std::uint64_t>(x) >= c.modulus_) {
        throw ConfigError("explicit residue component out of range [0, p^k)");
      }
      i = i * c.modulus_ + static_cast<std::uint64_t>(x);
    }
    idx.insert(i);
  }
  if (idx.empty()) throw ConfigError("explicit residue set must be nonempty");
  c.residues_.assign(idx.begin(), idx.end());
  return c;
}

bool LocalCondition::accepts(std::span<const std::int64_t> x) const {
  switch (mode_) {
    case ConditionMode::kFullSublattice:
      return std::any_of(x.begin(), x.end(), [&](std::int64_t xi) { return mod_floor(xi, modulus_) != 0; });
    case ConditionMode::kPerCoordinateKFree:
      for (std::size_t i = 0; i < x.size() && i < coord_exponents_.size(); ++i) {
        const unsigned ki = coord_exponents_[i];
        if (ki == 0) continue;
        if (mod_floor(x[i], ipow(p_, ki)) == 0) return false;
      }
      return true;
    case ConditionMode::kExplicitResidues: {
      std::uint64_t i = 0;
      for (std::int64_t xi : x) i = i * modulus_ + mod_floor(xi, modulus_);
      return std::binary_search(residues_.begin(), residues_.end(), i);
    }
  }
  return false;
}

Rational LocalCondition::measure(unsigned dimension) const {
  switch (mode_) {
    case ConditionMode::kFullSublattice: {
      BigInt total = boost::multiprecision::pow(BigInt(modulus_), dimension);
      return Rational(total - 1, total);
    }
    case ConditionMode::kPerCoordinateKFree: {
      Rational m = 1;
      for (unsigned ki : coord_exponents_) {
        if (ki == 0) continue;
        const BigInt pk = boost::multiprecision::pow(BigInt(p_), ki);
        m *= Rational(pk - 1, pk);
      }
      return m;
    }
    case ConditionMode::kExplicitResidues: {
      BigInt total = boost::multiprecision::pow(BigInt(modulus_), dimension_);
      return Rational(BigInt(residues_.size()), total);
    }
  }
  return 1;
}

// ---------------------------------------------------------------- CongruenceWindow

std::string to_string(WindowFamily f) {
  switch (f) {
    case WindowFamily::kTrivial: return "trivial";
    case WindowFamily::kPrimitive: return "primitive";
    case WindowFamily::kKFree: return "kfree";
    case WindowFamily::kCustom: return "custom";
  }
  return "unknown";
}

namespace {
void validate_family(const FamilySpec& f) {
  if (f.dimension == 0) throw ConfigError("window dimension must be >= 1");
  if (f.kind == WindowFamily::kKFree) {
    if (f.kfree_exponents.size() != f.dimension) {
      throw ConfigError("k-free window needs one exponent per coordinate");
    }
    if (std::all_of(f.kfree_exponents.begin(), f.kfree_exponents.end(), [](unsigned k) { return k == 0; })) {
      throw ConfigError("k-free window needs at least one constrained coordinate");
    }
  }
  if (f.kind == WindowFamily::kCustom) throw ConfigError("custom windows are built from explicit conditions");
}
}  // namespace

void CongruenceWindow::finalize() {
  std::sort(conditions_.begin(), conditions_.end(),
            [](const LocalCondition& a, const LocalCondition& b) { return a.prime() < b.prime(); });
  for (std::size_t i = 1; i < conditions_.size(); ++i) {
    if (conditions_[i].prime() == conditions_[i - 1].prime()) {
      throw ConfigError("window lists prime " + std::to_string(conditions_[i].prime()) + " twice");
    }
  }
  level_ = 1;
  for (const auto& c : conditions_) {
    if (level_ > (std::uint64_t{1} << 62) / c.modulus()) {
      level_ = 0;  // not representable; reduce_mod_level will refuse
      break;
    }
    level_ *= c.modulus();
  }
}

CongruenceWindow CongruenceWindow::trivial(unsigned dimension) {
  if (dimension == 0) throw ConfigError("window dimension must be >= 1");
  CongruenceWindow w;
  w.dimension_ = dimension;
  w.family_ = FamilySpec::trivial(dimension);
  w.finalize();
  return w;
}

CongruenceWindow CongruenceWindow::exact(const FamilySpec& family) {
  validate_family(family);
  CongruenceWindow w;
  w.dimension_ = family.dimension;
  w.family_ = family;
  w.exact_tail_ = family.kind != WindowFamily::kTrivial;
  w.finalize();
  return w;
}

CongruenceWindow CongruenceWindow::truncated(const FamilySpec& family, std::vector<std::uint64_t> primes) {
  validate_family(family);
  CongruenceWindow w;
  w.dimension_ = family.dimension;
  w.family_ = family;
  if (family.kind != WindowFamily::kTrivial) {
    for (std::uint64_t p : primes) {
      if (family.kind == WindowFamily::kPrimitive) {
        w.conditions_.push_back(LocalCondition::full_sublattice(p, 1));
      } else {
        w.conditions_.push_back(LocalCondition::per_coordinate_kfree(p, family.kfree_exponents));
      }
    }
  }
  w.finalize();
  return w;
}

CongruenceWindow CongruenceWindow::custom(unsigned dimension, std::vector<LocalCondition> conditions,
                                          bool exact_tail) {
  if (dimension == 0) throw ConfigError("window dimension must be >= 1");
  for (const auto& c : conditions) {
    if (c.mode() == ConditionMode::kPerCoordinateKFree && c.coordinate_exponents().size() != dimension) {
      throw ConfigError("k-free condition has wrong number of coordinate exponents");
    }
  }
  CongruenceWindow w;
  w.dimension_ = dimension;
  w.family_ = FamilySpec{WindowFamily::kCustom, dimension, {}};
  w.exact_tail_ = exact_tail;
  w.conditions_ = std::move(conditions);
  w.finalize();
  return w;
}

std::vector<std::uint64_t> CongruenceWindow::prime_set() const {
  std::vector<std::uint64_t> ps;
  ps.reserve(conditions_.size());
  for (const auto& c : conditions_) ps.push_back(c.prime());
  return ps;
}

bool CongruenceWindow::contains(std::span<const std::int64_t> x) const {
  if (exact_tail_) {
    switch (family_.kind) {
      case WindowFamily::kPrimitive:
        return gcd_abs(x) == 1;
      case WindowFamily::kKFree:
        for (std::size_t i = 0; i < x.size(); ++i) {
          const unsigned k = family_.kfree_exponents[i];
          if (k != 0 && !is_kfree(x[i], k)) return false;
        }
        return true;
      default:
        break;  // custom: only the listed conditions are decidable
    }
  }
  for (const auto& c : conditions_) {
    if (!c.accepts(x)) return false;
  }
  return true;
}

bool window_contains(const CongruenceWindow& w, std::span<const std::int64_t> x) { return w.contains(x); }

WindowMeasure family_measure(const FamilySpec& family, std::uint32_t euler_prime_bound) {
  WindowMeasure m;
  m.finite_level = 1;
  switch (family.kind) {
    case WindowFamily::kTrivial:
      m.value = 1.0;
      return m;
    case WindowFamily::kPrimitive: {
      const auto e = inverse_zeta_euler(family.dimension, euler_prime_bound);
      m.value = static_cast<double>(e.value);
      m.error_bound = static_cast<double>(e.error_bound);
      return m;
    }
    case WindowFamily::kKFree: {
      long double v = 1.0L;
      long double err = 0.0L;
      for (unsigned k : family.kfree_exponents) {
        if (k == 0) continue;
        if (k == 1) throw UnsupportedError("1-free coordinates have measure zero; use k >= 2");
        const auto e = inverse_zeta_euler(k, euler_prime_bound);
        v *= e.value;
        err += e.error_bound;
      }
      m.value = static_cast<double>(v);
      m.error_bound = static_cast<double>(err);
      return m;
    }
    case WindowFamily::kCustom:
      break;
  }
  throw UnsupportedError("custom window with exact_tail: no closed form for the all-prime measure");
}

WindowMeasure window_measure(const CongruenceWindow& w, std::uint32_t euler_prime_bound) {
  WindowMeasure m;
  m.finite_level = 1;
  for (const auto& c : w.conditions()) m.finite_level *= c.measure(w.dimension());
  m.level = w.level_modulus();
  if (!w.exact_tail()) {
    m.value = to_double(m.finite_level);
    return m;
  }
  const WindowMeasure all = family_measure(w.family(), euler_prime_bound);
  m.value = all.value;
  m.error_bound = all.error_bound;
  return m;
}

CongruenceWindow epsilon_truncate(const FamilySpec& family, double eps) {
  if (!(eps > 0.0)) throw ConfigError("epsilon must be positive");
  validate_family(family);
  const double target = family_measure(family).value + eps;
  if (family.kind == WindowFamily::kTrivial) return CongruenceWindow::trivial(family.dimension);

  std::vector<std::uint64_t> primes;
  Rational partial = 1;
  std::uint32_t bound = 64;
  std::size_t next = 0;
  std::vector<std::uint32_t> table = primes_up_to(bound);
  while (to_double(partial) > target) {
    if (next == table.size()) {
      bound *= 2;
      table = primes_up_to(bound);
    }
    const std::uint64_t p = table[next++];
    primes.push_back(p);
    const auto cond = family.kind == WindowFamily::kPrimitive
                          ? LocalCondition::full_sublattice(p, 1)
                          : LocalCondition::per_coordinate_kfree(p, family.kfree_exponents);
    partial *= cond.measure(family.dimension);
  }
  return CongruenceWindow::truncated(family, std::move(primes));
}

// ---------------------------------------------------------------- ResidueWindow

class ResidueWindowBuilder {
 public:
  static ResidueWindow make(unsigned dimension, std::uint64_t modulus, std::uint64_t denominator) {
    return ResidueWindow(dimension, modulus, denominator);
  }
  static void set(ResidueWindow& w, std::uint64_t index) { w.set(index); }
};

ResidueWindow::ResidueWindow(unsigned dimension, std::uint64_t modulus, std::uint64_t denominator)
    : dimension_(dimension), modulus_(modulus), denominator_(denominator) {
  if (dimension == 0) throw ConfigError("residue window dimension must be >= 1");
  if (modulus == 0) throw ConfigError("residue window modulus must be >= 1");
  entries_ = table_entries(modulus, dimension);
  if (entries_ == 0) {
    throw ResourceLimitError("level " + std::to_string(modulus) + " in dimension " + std::to_string(dimension) +
                             " needs more than 2^32 residues");
  }
  bits_.assign((entries_ + 63) / 64, 0);
}

void ResidueWindow::set(std::uint64_t index) {
  std::uint64_t& word = bits_[index >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (index & 63);
  if (!(word & bit)) {
    word |= bit;
    ++cardinality_;
  }
}

ResidueWindow ResidueWindow::full(unsigned dimension, std::uint64_t modulus) {
  ResidueWindow w(dimension, modulus, 1);
  for (std::uint64_t i = 0; i < w.entries_; ++i) w.set(i);
  return w;
}

Rational ResidueWindow::density() const { return Rational(BigInt(cardinality_), BigInt(entries_)); }

Rational ResidueWindow::measure() const {
  return density() * Rational(boost::multiprecision::pow(BigInt(denominator_), dimension_));
}

std::uint64_t ResidueWindow::index_of(std::span<const std::int64_t> x) const {
  std::uint64_t i = 0;
  for (std::int64_t xi : x) i = i * modulus_ + mod_floor(xi, modulus_);
  return i;
}

std::vector<std::int64_t> ResidueWindow::residue_at(std::uint64_t index) const {
  std::vector<std::int64_t> r(dimension_);
  for (unsigned k = dimension_; k-- > 0;) {
    r[k] = static_cast<std::int64_t>(index % modulus_);
    index /= modulus_;
  }
  return r;
}

std::vector<std::vector<std::int64_t>> ResidueWindow::residues() const {
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(cardinality_);
  for (std::uint64_t i = 0; i < entries_; ++i) {
    if (contains_index(i)) out.push_back(residue_at(i));
  }
  return out;
}

ResidueWindow ResidueWindow::lift(std::uint64_t new_modulus) const {
  if (new_modulus == 0 || new_modulus % modulus_ != 0) {
    throw ConfigError("lift target " + std::to_string(new_modulus) + " is not a multiple of " +
                      std::to_string(modulus_));
  }
  ResidueWindow out(dimension_, new_modulus, denominator_);
  std::vector<std::int64_t> r(dimension_);
  for (std::uint64_t i = 0; i < out.entries_; ++i) {
    std::uint64_t rest = i;
    for (unsigned k = dimension_; k-- > 0;) {
      r[k] = static_cast<std::int64_t>(rest % new_modulus);
      rest /= new_modulus;
    }
    if (contains(r)) out.set(i);
  }
  return out;
}

ResidueWindow reduce_mod_level(const CongruenceWindow& w) {
  if (w.exact_tail()) {
    throw ConfigError("window has an exact all-prime tail; call epsilon_truncate before reducing to a level");
  }
  if (w.level_modulus() == 0) throw ResourceLimitError("window level modulus overflows 64 bits");
  auto out = ResidueWindowBuilder::make(w.dimension(), w.level_modulus(), 1);
  const std::uint64_t n = out.size();
  std::vector<std::int64_t> r(w.dimension());
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t rest = i;
    for (unsigned k = w.dimension(); k-- > 0;) {
      r[k] = static_cast<std::int64_t>(rest % w.level_modulus());
      rest /= w.level_modulus();
    }
    if (w.contains(r)) ResidueWindowBuilder::set(out, i);
  }
  return out;
}

ResidueWindow shift_window(const ResidueWindow& w, std::span<const Fraction> beta) {
  if (beta.size() != w.dimension()) throw ConfigError("shift has wrong dimension");
  std::uint64_t beta_den = 1;
  for (const Fraction& b : beta) beta_den = std::lcm(beta_den, static_cast<std::uint64_t>(b.den));
  const std::uint64_t new_den = std::lcm(w.denominator(), beta_den);
  const std::uint64_t raise = new_den / w.denominator();
  const std::uint64_t new_mod = w.modulus() * raise;
  if (table_entries(new_mod, w.dimension()) == 0) {
    throw LevelRaiseError("shift denominator " + std::to_string(beta_den) + " requires level " +
                              std::to_string(new_mod) + ", beyond the 2^32 residue cap",
                          new_mod);
  }
  auto out = ResidueWindowBuilder::make(w.dimension(), new_mod, new_den);

  // x in W - beta  <=>  x + beta in W. Writing x = r'/D' and an element of W
  // as z/D, the accepted r' are exactly raise*z - D'*beta (mod N'), z in W.
  std::vector<std::int64_t> offset(w.dimension());
  for (unsigned i = 0; i < w.dimension(); ++i) {
    offset[i] = beta[i].num * static_cast<std::int64_t>(new_den / static_cast<std::uint64_t>(beta[i].den));
  }
  std::vector<std::int64_t> r(w.dimension());
  for (std::uint64_t idx = 0; idx < w.size(); ++idx) {
    if (!w.contains_index(idx)) continue;
    const auto z = w.residue_at(idx);
    for (unsigned i = 0; i < w.dimension(); ++i) {
      r[i] = static_cast<std::int64_t>(raise) * z[i] - offset[i];
    }
    ResidueWindowBuilder::set(out, out.index_of(r));
  }
  return out;
}

}  // namespace latstat
