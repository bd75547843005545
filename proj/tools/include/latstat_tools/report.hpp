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

#include "latstat/stats.hpp"

namespace latstat::tools {

// Round-trip decimal rendering (17 significant digits).
std::string format_number(double v);

// Header plus rows; every row must have the header's width.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  void add_numbers(const std::vector<double>& values);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& content);

enum class PlotKind {
  kHistogram,  // density histogram of a sample over [0, x_max]
  kCdf,        // empirical CDF as a step path
  kBars,       // probabilities of a discrete distribution
};

struct SvgStyle {
  PlotKind kind = PlotKind::kHistogram;
  std::string title;
  std::string x_label = "x";
  std::string y_label = "density";
  double x_max = 5.0;   // integer tick marks 0..x_max
  double bin_width = 0.1;
};

// Standalone SVG document (800x600 viewBox). Throws ConfigError on an empty
// distribution.
std::string emit_svg(const EmpiricalDistribution& dist, const SvgStyle& style);

}  // namespace latstat::tools
