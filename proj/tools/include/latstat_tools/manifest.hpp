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
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace latstat::tools {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct OutputRecord {
  std::string path;
  std::string sha256;
  std::uint64_t bytes = 0;
};

// Everything needed to rerun a subcommand. Outputs other than the manifest
// are byte-identical for equal (version, config, parameters, seed) whatever
// the worker count; wall_seconds is informational.
struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  std::string config_hash;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  double wall_seconds = 0.0;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> streams;
  std::vector<OutputRecord> outputs;

  // Hashes and records a file that has already been written.
  void add_output(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

// Writes <primary>.manifest.json and returns its path.
std::filesystem::path write_manifest(const RunManifest& m, const std::filesystem::path& primary_output);

// True when every recorded digest matches the file on disk.
bool verify_manifest(const std::filesystem::path& manifest_path);

}  // namespace latstat::tools
