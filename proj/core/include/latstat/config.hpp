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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "latstat/pointset.hpp"
#include "latstat/window.hpp"

namespace latstat {

// Parser for the TOML subset used by configuration files: key/value pairs,
// [table] and [[array-of-tables]] headers, dotted keys, basic and literal
// strings, integers, floats, booleans, arrays and inline tables. Dates and
// multi-line strings are rejected. Errors carry the line number.
nlohmann::json parse_toml(std::string_view text);
nlohmann::json load_toml(const std::filesystem::path& path);

// Window table:
//   dimension = 2
//   family = "primitive"        # trivial | primitive | kfree | custom
//   exponents = [2, 2]          # kfree: per-coordinate exponent, 0 = free
//   exact_tail = true           # default when neither primes nor epsilon is set
//   primes = [2, 3, 5]          # truncate to these primes
//   epsilon = 0.05              # or truncate to the smallest adequate prime prefix
//   [[condition]]               # custom: one table per prime
//   p = 2
//   mode = "sublattice"         # sublattice | kfree | residues
//   k = 1
//   exponents = [1, 0]          # kfree mode
//   residues = [[0, 1], [1, 0]] # residues mode, modulo p^k
CongruenceWindow window_from_json(const nlohmann::json& table);
CongruenceWindow load_window(const std::filesystem::path& path);

// Point-set table: dimension, alpha (numbers or strings such as "1/2" and
// "sqrt2"), basis (rows), c, T, exclude_origin, and a window given either
// inline as [window] or as a path relative to base_dir.
PointConfig point_config_from_json(const nlohmann::json& table, const std::filesystem::path& base_dir = {});
PointConfig load_point_config(const std::filesystem::path& path);

// Real vector from numbers or constant strings ("sqrt2", "pi", "1/3", ...).
std::vector<double> real_vector_from_json(const nlohmann::json& value);

}  // namespace latstat
