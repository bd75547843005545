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

namespace latstat {

__extension__ using int128 = __int128;
__extension__ using uint128 = unsigned __int128;

// All primes <= bound, ascending (sieve of Eratosthenes).
std::vector<std::uint32_t> primes_up_to(std::uint32_t bound);

// The first `count` primes.
std::vector<std::uint32_t> first_primes(std::size_t count);

bool is_prime(std::uint64_t n);

// Distinct prime factors of n >= 1, ascending.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

// Binary gcd of |a| and |b|; gcd(0, 0) = 0.
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t gcd_abs(std::int64_t a, std::int64_t b);
std::uint64_t gcd_abs(std::span<const std::int64_t> xs);

// True when no prime p has p^k | n. Zero is never k-free. Trial division by
// primes with p^k <= |n|, so no factorization of large integers is needed.
bool is_kfree(std::int64_t n, unsigned k);

// prod_{p <= bound} (1 - p^{-s}) evaluated in long double, together with a
// bound on its distance to the full Euler product 1/zeta(s).
struct EulerProduct {
  long double value;
  long double error_bound;
};
EulerProduct inverse_zeta_euler(unsigned s, std::uint32_t prime_bound = 1'000'000);

// (a * b) mod m without overflow for m < 2^63.
inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<uint128>(a) * b) % m);
}

inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

// Non-negative residue of x modulo m > 0.
inline std::uint64_t mod_floor(std::int64_t x, std::uint64_t m) {
  const auto sm = static_cast<std::int64_t>(m);
  std::int64_t r = x % sm;
  if (r < 0) r += sm;
  return static_cast<std::uint64_t>(r);
}

}  // namespace latstat
