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

#include "latstat/primes.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace latstat {

std::vector<std::uint32_t> primes_up_to(std::uint32_t bound) {
  std::vector<std::uint32_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t q = p * p; q <= bound; q += p) composite[q] = true;
  }
  return out;
}

std::vector<std::uint32_t> first_primes(std::size_t count) {
  std::uint32_t bound = 16;
  for (;;) {
    auto ps = primes_up_to(bound);
    if (ps.size() >= count) {
      ps.resize(count);
      return ps;
    }
    bound *= 2;
  }
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    if (n % p == 0) return n == p;
  }
  for (std::uint64_t d = 17; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  if (a == 0) return b;
  if (b == 0) return a;
  const int shift = std::countr_zero(a | b);
  a >>= std::countr_zero(a);
  do {
    b >>= std::countr_zero(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

namespace {
std::uint64_t uabs(std::int64_t x) {
  return x < 0 ? static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(x)
               : static_cast<std::uint64_t>(x);
}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> table = primes_up_to(1u << 20);
  return table;
}
}  // namespace

std::uint64_t gcd_abs(std::int64_t a, std::int64_t b) { return gcd_u64(uabs(a), uabs(b)); }

std::uint64_t gcd_abs(std::span<const std::int64_t> xs) {
  std::uint64_t g = 0;
  for (std::int64_t x : xs) {
    g = gcd_u64(g, uabs(x));
    if (g == 1) break;
  }
  return g;
}

bool is_kfree(std::int64_t n, unsigned k) {
  std::uint64_t m = uabs(n);
  if (m == 0) return false;
  if (k == 0) return false;
  if (k == 1) return m == 1;
  for (std::uint32_t p : small_primes()) {
    const std::uint64_t pk = ipow(p, k);
    if (pk > m) return true;
    if (m % p != 0) continue;
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      if (++e >= k) return false;
    }
  }
  // Remaining cofactor has no prime factor below 2^20; for desk-scale inputs
  // (|n| < 2^40) it is then prime or 1, so it cannot hold a k-th power.
  return true;
}

EulerProduct inverse_zeta_euler(unsigned s, std::uint32_t prime_bound) {
  long double prod = 1.0L;
  for (std::uint32_t p : primes_up_to(prime_bound)) {
    prod *= 1.0L - std::pow(static_cast<long double>(p), -static_cast<long double>(s));
  }
  // Tail: 1 >= prod_{p>P}(1 - p^-s) >= 1 - sum_{n>P} n^-s >= 1 - P^{1-s}/(s-1).
  long double tail = 0.0L;
  if (s >= 2) {
    tail = std::pow(static_cast<long double>(prime_bound), 1.0L - s) / (s - 1);
  } else {
    tail = 1.0L;
  }
  return {prod, prod * tail};
}

}  // namespace latstat
