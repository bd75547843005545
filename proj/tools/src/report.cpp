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

#include "latstat_tools/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "latstat/error.hpp"

namespace latstat::tools {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw ConfigError("CSV row width does not match the header");
  rows_.push_back(std::move(cells));
}

void CsvTable::add_numbers(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw ConfigError("write to '" + path.string() + "' failed");
}

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 80, kRight = 40, kTop = 50, kBottom = 70;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Ceiling of v on a 1-2-5 grid, for the y axis.
double nice_ceiling(double v) {
  if (!(v > 0)) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * p >= v * (1 - 1e-12)) return m * p;
  }
  return 10 * p;
}

class Canvas {
 public:
  Canvas(double x_max, double y_max) : x_max_(x_max), y_max_(y_max) {}

  double sx(double x) const { return kLeft + (kWidth - kLeft - kRight) * std::clamp(x / x_max_, 0.0, 1.0); }
  double sy(double y) const { return kHeight - kBottom - (kHeight - kTop - kBottom) * std::clamp(y / y_max_, 0.0, 1.0); }

  void axes(const SvgStyle& style, std::ostringstream& os) const {
    const double x0 = sx(0), y0 = sy(0), x1 = sx(x_max_), y1 = sy(y_max_);
    os << "<g stroke=\"#000\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1) << "\" y2=\"" << fmt(y0) << "\"/>\n";
    os << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x0) << "\" y2=\"" << fmt(y1) << "\"/>\n";
    const int nx = static_cast<int>(std::floor(x_max_ + 1e-9));
    for (int i = 0; i <= nx; ++i) {
      os << "<line x1=\"" << fmt(sx(i)) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(sx(i)) << "\" y2=\""
         << fmt(y0 + 6) << "\"/>\n";
    }
    for (int i = 0; i <= 5; ++i) {
      const double y = y_max_ * i / 5.0;
      os << "<line x1=\"" << fmt(x0 - 6) << "\" y1=\"" << fmt(sy(y)) << "\" x2=\"" << fmt(x0) << "\" y2=\""
         << fmt(sy(y)) << "\"/>\n";
    }
    os << "</g>\n<g font-family=\"sans-serif\" font-size=\"14\" fill=\"#000\">\n";
    for (int i = 0; i <= nx; ++i) {
      os << "<text x=\"" << fmt(sx(i)) << "\" y=\"" << fmt(y0 + 24) << "\" text-anchor=\"middle\">" << i
         << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
      const double y = y_max_ * i / 5.0;
      char label[32];
      std::snprintf(label, sizeof label, "%g", y);
      os << "<text x=\"" << fmt(x0 - 10) << "\" y=\"" << fmt(sy(y) + 5) << "\" text-anchor=\"end\">" << label
         << "</text>\n";
    }
    os << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(kHeight - 20)
       << "\" text-anchor=\"middle\">" << escape(style.x_label) << "</text>\n";
    os << "<text x=\"20\" y=\"" << fmt((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << fmt((y0 + y1) / 2) << ")\">" << escape(style.y_label) << "</text>\n";
    if (!style.title.empty()) {
      os << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">"
         << escape(style.title) << "</text>\n";
    }
    os << "</g>\n";
  }

 private:
  double x_max_, y_max_;
};

}  // namespace

std::string emit_svg(const EmpiricalDistribution& dist, const SvgStyle& style) {
  if (dist.empty()) throw ConfigError("cannot plot an empty distribution");
  if (!(style.x_max > 0)) throw ConfigError("plot range must be positive");
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#fff\"/>\n";

  switch (style.kind) {
    case PlotKind::kHistogram: {
      if (dist.discrete()) throw ConfigError("histograms need a continuous sample");
      if (!(style.bin_width > 0)) throw ConfigError("bin width must be positive");
      const auto bins = static_cast<std::size_t>(std::ceil(style.x_max / style.bin_width - 1e-9));
      std::vector<double> density(bins, 0.0);
      const double n = static_cast<double>(dist.size());
      for (double v : dist.sorted()) {
        if (!(v >= 0) || v >= style.x_max) continue;
        density[std::min(bins - 1, static_cast<std::size_t>(v / style.bin_width))] += 1.0 / (n * style.bin_width);
      }
      const Canvas canvas(style.x_max, nice_ceiling(*std::max_element(density.begin(), density.end())));
      canvas.axes(style, os);
      os << "<g fill=\"#4a78b0\" stroke=\"none\">\n";
      for (std::size_t b = 0; b < bins; ++b) {
        if (density[b] <= 0) continue;
        const double x0 = canvas.sx(b * style.bin_width);
        const double x1 = canvas.sx(std::min(style.x_max, (b + 1) * style.bin_width));
        const double y = canvas.sy(density[b]);
        os << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(x1 - x0) << "\" height=\""
           << fmt(canvas.sy(0) - y) << "\"/>\n";
      }
      os << "</g>\n";
      break;
    }
    case PlotKind::kCdf: {
      if (dist.discrete()) throw ConfigError("CDF plots need a continuous sample");
      const Canvas canvas(style.x_max, 1.0);
      canvas.axes(style, os);
      const auto s = dist.sorted();
      const double n = static_cast<double>(dist.size());
      os << "<path fill=\"none\" stroke=\"#4a78b0\" stroke-width=\"2\" d=\"M" << fmt(canvas.sx(0)) << ","
         << fmt(canvas.sy(0));
      std::size_t i = 0;
      while (i < s.size() && s[i] < style.x_max) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i]) ++j;
        os << " H" << fmt(canvas.sx(s[i])) << " V" << fmt(canvas.sy(j / n));
        i = j;
      }
      os << " H" << fmt(canvas.sx(style.x_max)) << "\"/>\n";
      break;
    }
    case PlotKind::kBars: {
      if (!dist.discrete()) throw ConfigError("bar plots need a discrete distribution");
      const auto rmax = static_cast<std::size_t>(std::floor(style.x_max + 1e-9));
      double top = 0.0;
      for (std::size_t r = 0; r <= rmax; ++r) top = std::max(top, dist.prob(r));
      const Canvas canvas(style.x_max + 1, nice_ceiling(top));
      canvas.axes(style, os);
      os << "<g fill=\"#4a78b0\" stroke=\"none\">\n";
      for (std::size_t r = 0; r <= rmax; ++r) {
        const double p = dist.prob(r);
        if (p <= 0) continue;
        const double x0 = canvas.sx(r + 0.1), x1 = canvas.sx(r + 0.9), y = canvas.sy(p);
        os << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(x1 - x0) << "\" height=\""
           << fmt(canvas.sy(0) - y) << "\"/>\n";
      }
      os << "</g>\n";
      break;
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace latstat::tools
