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
#include <stdexcept>
#include <string>

namespace latstat {

// Malformed input: bad window data, bad config values, violated preconditions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The request is well-formed but exceeds a desk-scale resource bound.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The operation has no implementation for this input (dimension, family, ...).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A rational shift whose denominator does not fit the current level.
class LevelRaiseError : public std::runtime_error {
 public:
  LevelRaiseError(const std::string& what, std::uint64_t required_modulus)
      : std::runtime_error(what), required_modulus_(required_modulus) {}

  std::uint64_t required_modulus() const noexcept { return required_modulus_; }

 private:
  std::uint64_t required_modulus_;
};

}  // namespace latstat
