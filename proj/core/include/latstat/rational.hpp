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

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace latstat {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Small exact rational used for shift components: num / den, den > 0, reduced.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction make(std::int64_t num, std::int64_t den);
  // Accepts "p", "p/q", or a finite decimal such as "-0.125".
  static Fraction parse(std::string_view text);

  long double value() const { return static_cast<long double>(num) / static_cast<long double>(den); }
  bool is_integer() const { return den == 1; }
  Fraction operator-() const { return {-num, den}; }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

std::string to_string(const Rational& r);
double to_double(const Rational& r);

}  // namespace latstat
