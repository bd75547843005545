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

#include "latstat/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "latstat/error.hpp"

namespace latstat {

namespace {

using json = nlohmann::json;

class TomlParser {
 public:
  explicit TomlParser(std::string_view text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    for (;;) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = parse_header(root);
      } else {
        parse_keyval(*table);
      }
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("TOML line " + std::to_string(line_) + ": " + what);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    if (eof()) fail("unexpected end of input");
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos_;
    }
  }
  // Whitespace, newlines and comments (inside arrays and between lines).
  void skip_blank_lines() {
    for (;;) {
      skip_ws();
      skip_comment();
      if (peek() == '\r' || peek() == '\n') {
        get();
        continue;
      }
      return;
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') get();
    if (peek() != '\n') fail("unexpected trailing characters");
    get();
  }

  std::string parse_simple_key() {
    skip_ws();
    if (peek() == '"') return parse_basic_string();
    if (peek() == '\'') return parse_literal_string();
    std::string key;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) {
      key += get();
    }
    if (key.empty()) fail("expected a key");
    return key;
  }

  std::vector<std::string> parse_key() {
    std::vector<std::string> parts{parse_simple_key()};
    skip_ws();
    while (peek() == '.') {
      get();
      parts.push_back(parse_simple_key());
      skip_ws();
    }
    return parts;
  }

  json* descend(json& root, const std::vector<std::string>& path, std::size_t count) {
    json* t = &root;
    for (std::size_t i = 0; i < count; ++i) {
      json& next = (*t)[path[i]];
      if (next.is_null()) next = json::object();
      if (next.is_array() && !next.empty() && next.back().is_object()) {
        t = &next.back();
      } else if (next.is_object()) {
        t = &next;
      } else {
        fail("key '" + path[i] + "' is not a table");
      }
    }
    return t;
  }

  json* parse_header(json& root) {
    get();
    const bool array = peek() == '[';
    if (array) get();
    const auto path = parse_key();
    expect(']');
    if (array) expect(']');
    json* parent = descend(root, path, path.size() - 1);
    json& slot = (*parent)[path.back()];
    if (array) {
      if (slot.is_null()) slot = json::array();
      if (!slot.is_array()) fail("'" + path.back() + "' is not an array of tables");
      slot.push_back(json::object());
      return &slot.back();
    }
    if (slot.is_null()) slot = json::object();
    if (!slot.is_object()) fail("'" + path.back() + "' is not a table");
    return &slot;
  }

  void parse_keyval(json& table) {
    const auto path = parse_key();
    skip_ws();
    expect('=');
    skip_ws();
    json value = parse_value();
    json* t = descend(table, path, path.size() - 1);
    if (t->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*t)[path.back()] = std::move(value);
  }

  json parse_value() {
    const char c = peek();
    if (c == '"') {
      if (s_.substr(pos_, 3) == "\"\"\"") fail("multi-line strings are not supported");
      return parse_basic_string();
    }
    if (c == '\'') return parse_literal_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  std::string parse_basic_string() {
    expect('"');
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      const char e = get();
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'u': append_utf8(out, parse_hex(4)); break;
        case 'U': append_utf8(out, parse_hex(8)); break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
  }

  std::uint32_t parse_hex(int digits) {
    std::uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      const char h = get();
      cp <<= 4;
      if (h >= '0' && h <= '9') {
        cp |= static_cast<std::uint32_t>(h - '0');
      } else if (h >= 'a' && h <= 'f') {
        cp |= static_cast<std::uint32_t>(h - 'a' + 10);
      } else if (h >= 'A' && h <= 'F') {
        cp |= static_cast<std::uint32_t>(h - 'A' + 10);
      } else {
        fail("invalid unicode escape");
      }
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("invalid unicode scalar value");
    return cp;
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::string parse_literal_string() {
    expect('\'');
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '\'') return out;
      out += c;
    }
  }

  json parse_array() {
    expect('[');
    json arr = json::array();
    for (;;) {
      skip_blank_lines();
      if (peek() == ']') {
        get();
        return arr;
      }
      arr.push_back(parse_value());
      skip_blank_lines();
      if (peek() == ',') {
        get();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  json parse_inline_table() {
    expect('{');
    json t = json::object();
    skip_ws();
    if (peek() == '}') {
      get();
      return t;
    }
    for (;;) {
      parse_keyval(t);
      skip_ws();
      if (peek() == '}') {
        get();
        return t;
      }
      expect(',');
      skip_ws();
    }
  }

  json parse_number() {
    std::string tok;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                      peek() == '.' || peek() == '_')) {
      const char c = get();
      if (c != '_') tok += c;
    }
    if (tok.empty()) fail("expected a value");
    std::string body = tok;
    const bool neg = body[0] == '-';
    if (body[0] == '+' || body[0] == '-') body.erase(0, 1);
    if (body == "inf") return neg ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    const bool is_float = tok.find_first_of(".eE") != std::string::npos;
    try {
      std::size_t used = 0;
      if (is_float) {
        const double v = std::stod(tok, &used);
        if (used == tok.size()) return v;
      } else {
        const long long v = std::stoll(tok, &used, 10);
        if (used == tok.size()) return v;
      }
    } catch (const std::exception&) {
    }
    fail("invalid value '" + tok + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

template <class T>
T get_or(const json& t, const char* key, T fallback) {
  if (!t.contains(key)) return fallback;
  try {
    return t.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

std::vector<std::uint64_t> uint_list(const json& v, const char* key) {
  if (!v.is_array()) throw ConfigError(std::string("key '") + key + "' must be an array");
  std::vector<std::uint64_t> out;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<std::int64_t>() < 0) {
      throw ConfigError(std::string("key '") + key + "' must hold non-negative integers");
    }
    out.push_back(x.get<std::uint64_t>());
  }
  return out;
}

std::string component_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw ConfigError("vector components must be numbers or strings");
}

LocalCondition condition_from_json(const json& c, unsigned d) {
  const auto p = get_or<std::int64_t>(c, "p", 0);
  if (p < 2) throw ConfigError("condition needs a prime 'p' >= 2");
  const auto mode = get_or<std::string>(c, "mode", "sublattice");
  const auto k = get_or<std::int64_t>(c, "k", 1);
  if (k < 1) throw ConfigError("condition exponent 'k' must be at least 1");
  if (mode == "sublattice") return LocalCondition::full_sublattice(static_cast<std::uint64_t>(p), static_cast<unsigned>(k));
  if (mode == "kfree") {
    if (!c.contains("exponents")) throw ConfigError("kfree condition needs 'exponents'");
    std::vector<unsigned> exps;
    for (auto e : uint_list(c.at("exponents"), "exponents")) exps.push_back(static_cast<unsigned>(e));
    if (exps.size() != d) throw ConfigError("kfree condition needs one exponent per coordinate");
    return LocalCondition::per_coordinate_kfree(static_cast<std::uint64_t>(p), std::move(exps));
  }
  if (mode == "residues") {
    if (!c.contains("residues") || !c.at("residues").is_array()) {
      throw ConfigError("residues condition needs a 'residues' array");
    }
    std::vector<std::vector<std::int64_t>> residues;
    for (const auto& r : c.at("residues")) {
      if (!r.is_array()) throw ConfigError("each residue must be an array");
      std::vector<std::int64_t> v;
      for (const auto& x : r) {
        if (!x.is_number_integer()) throw ConfigError("residue components must be integers");
        v.push_back(x.get<std::int64_t>());
      }
      residues.push_back(std::move(v));
    }
    return LocalCondition::explicit_residues(static_cast<std::uint64_t>(p), static_cast<unsigned>(k), d, residues);
  }
  throw ConfigError("unknown condition mode '" + mode + "'");
}

}  // namespace

nlohmann::json parse_toml(std::string_view text) { return TomlParser(text).parse(); }

nlohmann::json load_toml(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_toml(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

CongruenceWindow window_from_json(const nlohmann::json& t) {
  if (!t.is_object()) throw ConfigError("window must be a table");
  const auto dim = get_or<std::int64_t>(t, "dimension", 2);
  if (dim < 1 || dim > 16) throw ConfigError("window dimension must lie in 1..16");
  const auto d = static_cast<unsigned>(dim);
  const auto family = get_or<std::string>(t, "family", "primitive");
  const bool has_primes = t.contains("primes");
  const bool has_eps = t.contains("epsilon");
  if (has_primes && has_eps) throw ConfigError("set at most one of 'primes' and 'epsilon'");

  if (family == "trivial") return CongruenceWindow::trivial(d);
  if (family == "custom") {
    if (has_primes || has_eps) throw ConfigError("custom windows take their primes from [[condition]] tables");
    std::vector<LocalCondition> conds;
    if (t.contains("condition")) {
      if (!t.at("condition").is_array()) throw ConfigError("'condition' must be an array of tables");
      for (const auto& c : t.at("condition")) conds.push_back(condition_from_json(c, d));
    }
    return CongruenceWindow::custom(d, std::move(conds), get_or<bool>(t, "exact_tail", false));
  }

  FamilySpec spec;
  if (family == "primitive") {
    spec = FamilySpec::primitive(d);
  } else if (family == "kfree") {
    if (!t.contains("exponents")) throw ConfigError("kfree window needs 'exponents'");
    std::vector<unsigned> exps;
    for (auto e : uint_list(t.at("exponents"), "exponents")) exps.push_back(static_cast<unsigned>(e));
    if (exps.size() != d) throw ConfigError("kfree window needs one exponent per coordinate");
    spec = FamilySpec::kfree(std::move(exps));
  } else {
    throw ConfigError("unknown window family '" + family + "'");
  }
  const bool exact = get_or<bool>(t, "exact_tail", !has_primes && !has_eps);
  if (exact) {
    if (has_primes || has_eps) throw ConfigError("exact_tail windows cannot also be truncated");
    return CongruenceWindow::exact(spec);
  }
  if (has_eps) {
    const auto eps = get_or<double>(t, "epsilon", 0.0);
    if (!(eps > 0)) throw ConfigError("epsilon must be positive");
    return epsilon_truncate(spec, eps);
  }
  if (!has_primes) throw ConfigError("truncated windows need 'primes' or 'epsilon'");
  return CongruenceWindow::truncated(spec, uint_list(t.at("primes"), "primes"));
}

CongruenceWindow load_window(const std::filesystem::path& path) { return window_from_json(load_toml(path)); }

std::vector<double> real_vector_from_json(const nlohmann::json& value) {
  if (!value.is_array()) throw ConfigError("expected an array of numbers");
  std::vector<std::string> parts;
  for (const auto& v : value) parts.push_back(component_text(v));
  const auto shift = Shift::parse(parts);
  std::vector<double> out;
  for (auto x : shift.values()) out.push_back(static_cast<double>(x));
  return out;
}

PointConfig point_config_from_json(const nlohmann::json& t, const std::filesystem::path& base_dir) {
  if (!t.is_object()) throw ConfigError("point configuration must be a table");
  PointConfig cfg;
  const auto dim = get_or<std::int64_t>(t, "dimension", 2);
  if (dim < 1 || dim > 16) throw ConfigError("dimension must lie in 1..16");
  cfg.dimension = static_cast<unsigned>(dim);

  if (!t.contains("window")) {
    cfg.window = CongruenceWindow::trivial(cfg.dimension);
  } else if (t.at("window").is_string()) {
    auto path = std::filesystem::path(t.at("window").get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    cfg.window = load_window(path);
  } else {
    json w = t.at("window");
    if (!w.contains("dimension")) w["dimension"] = dim;
    cfg.window = window_from_json(w);
  }

  if (t.contains("alpha")) {
    if (!t.at("alpha").is_array()) throw ConfigError("'alpha' must be an array");
    std::vector<std::string> parts;
    for (const auto& v : t.at("alpha")) parts.push_back(component_text(v));
    cfg.alpha = Shift::parse(parts);
  } else {
    cfg.alpha = Shift::zero(cfg.dimension);
  }

  if (t.contains("basis")) {
    const auto& rows = t.at("basis");
    if (!rows.is_array()) throw ConfigError("'basis' must be an array of rows");
    for (const auto& row : rows) {
      if (!row.is_array()) throw ConfigError("'basis' must be an array of rows");
      for (const auto& x : row) {
        if (!x.is_number_integer()) throw ConfigError("basis entries must be integers");
        cfg.basis.push_back(x.get<std::int64_t>());
      }
    }
  }
  cfg.c = get_or<double>(t, "c", 0.0);
  cfg.T = get_or<double>(t, "T", 1.0);
  cfg.exclude_origin = get_or<bool>(t, "exclude_origin", true);
  cfg.validate();
  return cfg;
}

PointConfig load_point_config(const std::filesystem::path& path) {
  return point_config_from_json(load_toml(path), path.parent_path());
}

}  // namespace latstat
