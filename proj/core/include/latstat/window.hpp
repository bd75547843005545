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
#include <string>
#include <vector>

#include "latstat/rational.hpp"

namespace latstat {

// Windows are subsets of the profinite completion Z^d given by finitely many
// congruence conditions, one per prime, optionally extended to all primes
// ("exact tail") for the built-in families.

enum class ConditionMode {
  kFullSublattice,       // reject x == 0 (mod p^k) as a d-vector
  kPerCoordinateKFree,   // reject x_i == 0 (mod p^{k_i}) for each constrained i
  kExplicitResidues,     // accept an explicit subset of (Z/p^k)^d
};

class LocalCondition {
 public:
  static LocalCondition full_sublattice(std::uint64_t p, unsigned k);
  // exponents[i] == 0 leaves coordinate i unconstrained.
  static LocalCondition per_coordinate_kfree(std::uint64_t p, std::vector<unsigned> exponents);
  // residues are vectors in [0, p^k)^d; duplicates are ignored.
  static LocalCondition explicit_residues(std::uint64_t p, unsigned k, unsigned dimension,
                                          const std::vector<std::vector<std::int64_t>>& residues);

  std::uint64_t prime() const { return p_; }
  unsigned exponent() const { return k_; }
  std::uint64_t modulus() const { return modulus_; }
  ConditionMode mode() const { return mode_; }
  const std::vector<unsigned>& coordinate_exponents() const { return coord_exponents_; }

  bool accepts(std::span<const std::int64_t> x) const;
  // Local Haar measure (#accepted residues) / p^{kd}.
  Rational measure(unsigned dimension) const;

 private:
  LocalCondition() = default;

  std::uint64_t p_ = 2;
  unsigned k_ = 1;
  std::uint64_t modulus_ = 2;
  ConditionMode mode_ = ConditionMode::kFullSublattice;
  std::vector<unsigned> coord_exponents_;
  unsigned dimension_ = 0;                // explicit mode only
  std::vector<std::uint64_t> residues_;   // explicit mode: sorted lexicographic indices
};

enum class WindowFamily { kTrivial, kPrimitive, kKFree, kCustom };

std::string to_string(WindowFamily f);

// The data needed to rebuild a built-in window at any prime set.
struct FamilySpec {
  WindowFamily kind = WindowFamily::kPrimitive;
  unsigned dimension = 2;
  std::vector<unsigned> kfree_exponents;  // kKFree only; one per coordinate, 0 = free

  static FamilySpec trivial(unsigned d) { return {WindowFamily::kTrivial, d, {}}; }
  static FamilySpec primitive(unsigned d) { return {WindowFamily::kPrimitive, d, {}}; }
  static FamilySpec kfree(std::vector<unsigned> exps) {
    const auto d = static_cast<unsigned>(exps.size());
    return {WindowFamily::kKFree, d, std::move(exps)};
  }
};

struct WindowMeasure {
  Rational finite_level;     // product of local measures over the prime set S
  double value = 1.0;        // finite_level, or the all-prime Euler product for exact windows
  double error_bound = 0.0;  // bound on |value - true measure| from Euler truncation
  std::uint64_t level = 1;   // N = prod_{p in S} p^{k_p}
};

class CongruenceWindow {
 public:
  static CongruenceWindow trivial(unsigned dimension);
  // All-prime window of a built-in family; membership by exact arithmetic.
  static CongruenceWindow exact(const FamilySpec& family);
  // Finite-level window of a built-in family, conditions at `primes` only.
  static CongruenceWindow truncated(const FamilySpec& family, std::vector<std::uint64_t> primes);
  // Arbitrary local conditions; primes must be distinct.
  static CongruenceWindow custom(unsigned dimension, std::vector<LocalCondition> conditions,
                                 bool exact_tail = false);

  unsigned dimension() const { return dimension_; }
  const FamilySpec& family() const { return family_; }
  bool exact_tail() const { return exact_tail_; }
  const std::vector<LocalCondition>& conditions() const { return conditions_; }
  std::vector<std::uint64_t> prime_set() const;
  // N = prod p^{k_p} over the prime set; 1 when the set is empty.
  std::uint64_t level_modulus() const { return level_; }

  // Membership of an integer vector (size == dimension()).
  bool contains(std::span<const std::int64_t> x) const;

 private:
  CongruenceWindow() = default;
  void finalize();

  unsigned dimension_ = 0;
  FamilySpec family_;
  bool exact_tail_ = false;
  std::vector<LocalCondition> conditions_;
  std::uint64_t level_ = 1;
};

// Haar measure of the window. Throws UnsupportedError for exact-tail custom
// windows, which have no closed form.
WindowMeasure window_measure(const CongruenceWindow& w, std::uint32_t euler_prime_bound = 1'000'000);

// Exact (all-prime) measure of a built-in family.
WindowMeasure family_measure(const FamilySpec& family, std::uint32_t euler_prime_bound = 1'000'000);

// Smallest prime prefix S = {p_1..p_n} whose truncated window has measure at
// most m + eps, m the exact family measure. The result is clopen at level
// prod p^k and contains the exact window.
CongruenceWindow epsilon_truncate(const FamilySpec& family, double eps);

bool window_contains(const CongruenceWindow& w, std::span<const std::int64_t> x);

// A finite-level window: accepted residues of (Z/N)^d stored as a bitset.
//
// With denominator D > 1 the window lives in (1/D) Z^d: an element y is
// accepted iff D*y is integral and (D*y mod N) is an accepted residue.
// Integer vectors passed to contains() are the numerators D*y. Shifting by a
// rational vector whose denominator exceeds the current one raises D (and N).
class ResidueWindow {
 public:
  static constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 32;

  // All residues accepted.
  static ResidueWindow full(unsigned dimension, std::uint64_t modulus);

  unsigned dimension() const { return dimension_; }
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t denominator() const { return denominator_; }
  std::uint64_t cardinality() const { return cardinality_; }
  std::uint64_t size() const { return entries_; }  // N^d
  // cardinality / N^d.
  Rational density() const;
  // Haar measure as a subset of the finite adeles: density * D^d.
  Rational measure() const;

  std::uint64_t index_of(std::span<const std::int64_t> x) const;
  std::vector<std::int64_t> residue_at(std::uint64_t index) const;
  bool contains_index(std::uint64_t index) const { return (bits_[index >> 6] >> (index & 63)) & 1u; }
  bool contains(std::span<const std::int64_t> x) const { return contains_index(index_of(x)); }
  // Accepted residues in lexicographic order.
  std::vector<std::vector<std::int64_t>> residues() const;

  // Same set at a level N' that is a multiple of N.
  ResidueWindow lift(std::uint64_t new_modulus) const;

  friend bool operator==(const ResidueWindow&, const ResidueWindow&) = default;

 private:
  friend class ResidueWindowBuilder;
  ResidueWindow(unsigned dimension, std::uint64_t modulus, std::uint64_t denominator);
  void set(std::uint64_t index);

  unsigned dimension_ = 0;
  std::uint64_t modulus_ = 1;
  std::uint64_t denominator_ = 1;
  std::uint64_t entries_ = 1;
  std::uint64_t cardinality_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Residue form of a finite-level window. Throws ConfigError for exact-tail
// windows (truncate first) and ResourceLimitError when N^d > 2^32.
ResidueWindow reduce_mod_level(const CongruenceWindow& w);

// W_beta = W - beta. Raises the level when beta's denominator does not divide
// D; throws LevelRaiseError carrying the required modulus when the raised
// level would exceed the bitset cap.
ResidueWindow shift_window(const ResidueWindow& w, std::span<const Fraction> beta);

}  // namespace latstat
