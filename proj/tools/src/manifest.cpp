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

#include "latstat_tools/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "latstat/error.hpp"
#include "latstat_tools/report.hpp"

namespace latstat::tools {

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs.push_back({path.string(), sha256_file(path), std::filesystem::file_size(path)});
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "latstat";
  j["tool_version"] = tool_version;
  j["subcommand"] = subcommand;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["wall_seconds"] = wall_seconds;
  j["parameters"] = parameters;
  j["streams"] = streams;
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : outputs) j["outputs"].push_back({{"path", o.path}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.tool_version = j.value("tool_version", "");
  m.subcommand = j.value("subcommand", "");
  m.config_hash = j.value("config_hash", "");
  m.seed = j.value("seed", std::uint64_t{0});
  m.jobs = j.value("jobs", 1u);
  m.wall_seconds = j.value("wall_seconds", 0.0);
  m.parameters = j.value("parameters", nlohmann::json::object());
  m.streams = j.value("streams", std::vector<std::string>{});
  for (const auto& o : j.value("outputs", nlohmann::json::array())) {
    m.outputs.push_back({o.at("path").get<std::string>(), o.at("sha256").get<std::string>(),
                         o.at("bytes").get<std::uint64_t>()});
  }
  return m;
}

std::filesystem::path write_manifest(const RunManifest& m, const std::filesystem::path& primary_output) {
  auto path = primary_output;
  path += ".manifest.json";
  write_text(path, m.to_json().dump(2) + "\n");
  return path;
}

bool verify_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ConfigError("cannot read '" + manifest_path.string() + "'");
  const auto m = RunManifest::from_json(nlohmann::json::parse(in));
  for (const auto& o : m.outputs) {
    if (!std::filesystem::exists(o.path) || sha256_file(o.path) != o.sha256) return false;
  }
  return true;
}

}  // namespace latstat::tools
