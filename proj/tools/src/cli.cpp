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

#include "latstat_tools/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "latstat/config.hpp"
#include "latstat/directions.hpp"
#include "latstat/error.hpp"
#include "latstat/homogeneous.hpp"
#include "latstat/lorentz.hpp"
#include "latstat/pointset.hpp"
#include "latstat/primes.hpp"
#include "latstat/window.hpp"
#include "latstat_tools/manifest.hpp"
#include "latstat_tools/report.hpp"

#ifndef LATSTAT_VERSION
#define LATSTAT_VERSION "0.0.0"
#endif

namespace latstat::tools {

const char* tool_version() { return LATSTAT_VERSION; }

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Options {
  std::string config;
  std::string out;
  std::string svg;
  std::string window;
  std::uint64_t seed = 1;
  unsigned jobs = 1;

  // dirs
  double sigma = 1.0;
  std::uint64_t draws = 10000;
  unsigned r_max = 10;
  // gaps
  double gap_max = 5.0;
  double gap_step = 0.01;
  // fpl
  double rho = 0.01;
  double xi_max = 4.0;
  double xi_step = 0.05;
  std::uint64_t dirs = 10000;
  std::string q;
  // limit-mc, siegel-check
  std::string mode;
  std::uint64_t level = 0;
  std::uint64_t samples = 100000;
  std::string shift = "irrational";
  double c = 0.0;
  unsigned boxes = 20;
  // reproduce-figure
  std::string figure;
  double T = 500.0;
};

unsigned effective_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string describe_window(const CongruenceWindow& w) {
  std::ostringstream os;
  os << to_string(w.family().kind);
  if (w.family().kind == WindowFamily::kKFree) {
    os << "(";
    for (std::size_t i = 0; i < w.family().kfree_exponents.size(); ++i) {
      os << (i ? "," : "") << w.family().kfree_exponents[i];
    }
    os << ")";
  }
  if (w.exact_tail()) {
    os << " exact";
  } else {
    os << " S={";
    const auto primes = w.prime_set();
    for (std::size_t i = 0; i < primes.size(); ++i) os << (i ? "," : "") << primes[i];
    os << "}";
  }
  return os.str();
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<double> uniform_grid(double max, double step) {
  if (!(step > 0) || !(max >= 0)) throw ConfigError("grid step must be positive and the range non-negative");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor(max / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) * step);
  return grid;
}

// Writes the table (and SVG) and a manifest, or prints the table when no
// output path was given.
class Emitter {
 public:
  Emitter(const Options& o, std::string subcommand, std::ostream& out)
      : o_(o), out_(out), start_(Clock::now()) {
    manifest_.tool_version = tool_version();
    manifest_.subcommand = std::move(subcommand);
    manifest_.seed = o.seed;
    manifest_.jobs = effective_jobs(o.jobs);
  }

  RunManifest& manifest() { return manifest_; }

  void finish(const CsvTable& table, const std::optional<std::string>& svg = std::nullopt,
              const std::string& svg_path = {}) {
    const std::string target_svg = svg_path.empty() ? o_.svg : svg_path;
    if (o_.out.empty()) {
      out_ << table.str();
      if (svg && !target_svg.empty()) write_text(target_svg, *svg);
      return;
    }
    write_text(o_.out, table.str());
    manifest_.add_output(o_.out);
    if (svg && !target_svg.empty()) {
      write_text(target_svg, *svg);
      manifest_.add_output(target_svg);
    }
    manifest_.wall_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    write_manifest(manifest_, o_.out);
  }

 private:
  const Options& o_;
  std::ostream& out_;
  Clock::time_point start_;
  RunManifest manifest_;
};

json describe_config(const PointConfig& cfg) {
  json j;
  j["dimension"] = cfg.dimension;
  j["window"] = describe_window(cfg.window);
  j["alpha"] = cfg.alpha.describe();
  j["basis"] = cfg.basis;
  j["c"] = cfg.c;
  j["T"] = cfg.T;
  j["exclude_origin"] = cfg.exclude_origin;
  return j;
}

struct LoadedConfig {
  PointConfig points;
  std::optional<std::vector<double>> q;
};

LoadedConfig load_config(const std::string& path) {
  const auto table = load_toml(path);
  LoadedConfig out{point_config_from_json(table, fs::path(path).parent_path()), std::nullopt};
  if (table.contains("q")) out.q = real_vector_from_json(table.at("q"));
  return out;
}

// ---------------------------------------------------------------- measure

int cmd_measure(const Options& o, std::ostream& out) {
  Emitter em(o, "measure", out);
  const auto w = load_window(o.window);
  const auto m = window_measure(w);
  CsvTable table({"family", "level_N", "measure_num", "measure_den", "measure_float"});
  if (w.exact_tail()) {
    table.add_row({to_string(w.family().kind), "inf", "", "", format_number(m.value)});
  } else {
    table.add_row({to_string(w.family().kind), std::to_string(m.level),
                   numerator(m.finite_level).str(), denominator(m.finite_level).str(), format_number(m.value)});
  }
  em.manifest().config_hash = sha256_hex(describe_window(w)).substr(0, 16);
  em.manifest().parameters = {{"window", describe_window(w)}, {"window_file", o.window},
                              {"euler_error_bound", m.error_bound}};
  em.finish(table);
  return kExitOk;
}

// ---------------------------------------------------------------- gen

int cmd_gen(const Options& o, std::ostream& out) {
  Emitter em(o, "gen", out);
  const auto cfg = load_config(o.config).points;
  const auto batch = enumerate(cfg, effective_jobs(o.jobs));
  std::vector<std::string> header;
  for (unsigned i = 1; i <= cfg.dimension; ++i) header.push_back("x_" + std::to_string(i));
  CsvTable table(header);
  std::vector<double> row(cfg.dimension);
  for (std::size_t i = 0; i < batch.count; ++i) {
    const auto p = batch.point(i);
    row.assign(p.begin(), p.end());
    table.add_numbers(row);
  }
  em.manifest().config_hash = hex64(cfg.hash());
  em.manifest().parameters = describe_config(cfg);
  em.manifest().parameters["count"] = batch.count;
  em.manifest().parameters["slack"] = batch.slack;
  em.manifest().parameters["peak_rss_kb"] = batch.peak_rss_kb;
  em.finish(table);
  return kExitOk;
}

// ---------------------------------------------------------------- dirs

PointConfig default_direction_config() {
  PointConfig cfg;
  cfg.window = CongruenceWindow::exact(FamilySpec::primitive(2));
  cfg.T = 1000.0;
  return cfg;
}

int cmd_dirs(const Options& o, std::ostream& out) {
  Emitter em(o, "dirs", out);
  const auto cfg = o.config.empty() ? default_direction_config() : load_config(o.config).points;
  const auto batch = enumerate(cfg, effective_jobs(o.jobs));
  const auto sample = project_directions(batch);
  const CapParams p{o.sigma, cfg.c, cfg.T, window_measure(cfg.window).value};
  const auto dist = local_statistics(sample, p, {}, o.draws, o.seed, effective_jobs(o.jobs));
  CsvTable table({"r", "prob", "stderr"});
  for (unsigned r = 0; r <= o.r_max; ++r) {
    table.add_row({std::to_string(r), format_number(dist.prob(r)), format_number(dist.prob_stderr(r))});
  }
  std::optional<std::string> svg;
  if (!o.svg.empty()) {
    svg = emit_svg(dist, {PlotKind::kBars, "local direction counts", "r", "probability",
                          static_cast<double>(o.r_max), 1.0});
  }
  em.manifest().config_hash = hex64(cfg.hash());
  em.manifest().parameters = describe_config(cfg);
  em.manifest().parameters["sigma"] = o.sigma;
  em.manifest().parameters["draws"] = o.draws;
  em.manifest().parameters["points"] = batch.count;
  em.manifest().streams = {"directions.local_statistics"};
  em.finish(table, svg);
  return kExitOk;
}

// ---------------------------------------------------------------- gaps

void run_gaps(const Options& o, const PointConfig& cfg, Emitter& em, const std::string& svg_path,
              const std::string& title) {
  const auto batch = enumerate(cfg, effective_jobs(o.jobs));
  const auto gaps = gap_distribution(project_directions(batch));
  CsvTable table({"gap", "cdf"});
  for (double g : uniform_grid(o.gap_max, o.gap_step)) table.add_numbers({g, gaps.cdf(g)});
  std::optional<std::string> svg;
  if (!svg_path.empty()) svg = emit_svg(gaps, {PlotKind::kHistogram, title, "normalized gap", "density", 5.0, 0.1});
  em.manifest().config_hash = hex64(cfg.hash());
  em.manifest().parameters = describe_config(cfg);
  em.manifest().parameters["points"] = batch.count;
  em.manifest().parameters["gap_step"] = o.gap_step;
  em.manifest().parameters["gap_max"] = o.gap_max;
  em.finish(table, svg, svg_path);
}

int cmd_gaps(const Options& o, std::ostream& out) {
  Emitter em(o, "gaps", out);
  run_gaps(o, load_config(o.config).points, em, o.svg, "gap distribution");
  return kExitOk;
}

int cmd_reproduce_figure(const Options& o, std::ostream& out) {
  PointConfig cfg;
  std::string title;
  const auto primitive = CongruenceWindow::exact(FamilySpec::primitive(2));
  const auto squarefree = CongruenceWindow::exact(FamilySpec::kfree({2, 2}));
  if (o.figure == "gaps-halfshift") {
    cfg.window = primitive;
    cfg.alpha = Shift::parse({"1/2", "1/2"});
    title = "primitive points shifted by (1/2, 1/2)";
  } else if (o.figure == "gaps-irrational") {
    cfg.window = primitive;
    cfg.alpha = Shift::parse({"sqrt2", "sqrt3"});
    title = "primitive points shifted by (sqrt 2, sqrt 3)";
  } else if (o.figure == "gaps-squarefree-halfshift") {
    cfg.window = squarefree;
    cfg.alpha = Shift::parse({"1/2", "1/2"});
    title = "squarefree coordinates shifted by (1/2, 1/2)";
  } else if (o.figure == "gaps-squarefree-irrational") {
    cfg.window = squarefree;
    cfg.alpha = Shift::parse({"sqrt2", "sqrt3"});
    title = "squarefree coordinates shifted by (sqrt 2, sqrt 3)";
  } else {
    throw ConfigError("unknown figure '" + o.figure +
                      "' (gaps-halfshift, gaps-irrational, gaps-squarefree-halfshift, gaps-squarefree-irrational)");
  }
  cfg.T = o.T;
  cfg.c = 0.0;
  Options local = o;
  if (local.out.empty()) local.out = "gaps.csv";
  std::string svg = local.svg;
  if (svg.empty()) svg = fs::path(local.out).replace_extension(".svg").string();
  Emitter em(local, "reproduce-figure", out);
  em.manifest().parameters["figure"] = o.figure;
  run_gaps(local, cfg, em, svg, title + ", T = " + format_number(o.T));
  return kExitOk;
}

// ---------------------------------------------------------------- fpl

int cmd_fpl(const Options& o, std::ostream& out) {
  Emitter em(o, "fpl", out);
  const auto loaded = load_config(o.config);
  const auto& cfg = loaded.points;
  std::vector<double> q(cfg.dimension, 0.0);
  if (!o.q.empty()) {
    std::vector<double> v;
    for (auto x : Shift::parse(split_commas(o.q)).values()) v.push_back(static_cast<double>(x));
    q = v;
  } else if (loaded.q) {
    q = *loaded.q;
  }
  if (q.size() != cfg.dimension) throw ConfigError("q must have the dimension of the point set");
  const auto grid = uniform_grid(o.xi_max, o.xi_step);
  const auto curves = fpl_distribution(cfg, q, {o.rho}, grid, o.dirs, {}, o.seed, effective_jobs(o.jobs));
  const auto& curve = curves.front();
  CsvTable table({"xi", "survival", "stderr", "censored_frac"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table.add_numbers({grid[i], curve.survival[i], curve.stderr[i], curve.censored_fraction});
  }
  std::optional<std::string> svg;
  if (!o.svg.empty()) {
    svg = emit_svg(curve.scaled_paths, {PlotKind::kCdf, "scaled free path length", "rho^(d-1) tau",
                                        "cumulative fraction", o.xi_max, 0.1});
  }
  em.manifest().config_hash = hex64(cfg.hash());
  em.manifest().parameters = describe_config(cfg);
  em.manifest().parameters["q"] = q;
  em.manifest().parameters["rho"] = o.rho;
  em.manifest().parameters["xi_max"] = o.xi_max;
  em.manifest().parameters["directions"] = o.dirs;
  em.manifest().parameters["censored_fraction"] = curve.censored_fraction;
  em.manifest().streams = {"lorentz.directions"};
  em.finish(table, svg);
  return kExitOk;
}

// ---------------------------------------------------------------- limit-mc, siegel-check

struct LevelWindow {
  ResidueWindow residues;
  std::string description;
  double epsilon = 0.0;  // truncated minus exact measure, when truncation happened
};

// Residue form at the requested level. Exact windows are truncated to the
// primes dividing the level.
LevelWindow level_window(const CongruenceWindow& w, std::uint64_t level) {
  LevelWindow out{ResidueWindow::full(w.dimension(), 1), {}, 0.0};
  CongruenceWindow finite = w;
  if (w.exact_tail()) {
    if (level == 0) throw ConfigError("exact windows need --level to fix the truncation");
    const auto primes = prime_factors(level);
    if (w.family().kind == WindowFamily::kCustom) {
      std::vector<LocalCondition> conds;
      for (const auto& c : w.conditions()) {
        if (level % c.modulus() == 0) conds.push_back(c);
      }
      finite = CongruenceWindow::custom(w.dimension(), conds);
    } else {
      finite = CongruenceWindow::truncated(w.family(), primes);
      out.epsilon = window_measure(finite).value - window_measure(w).value;
    }
  }
  out.residues = reduce_mod_level(finite);
  if (level != 0 && out.residues.modulus() != level) {
    if (level % out.residues.modulus() != 0) {
      throw ConfigError("level " + std::to_string(level) + " is not a multiple of the window modulus " +
                        std::to_string(out.residues.modulus()));
    }
    out.residues = out.residues.lift(level);
  }
  out.description = describe_window(finite);
  return out;
}

ShiftMode parse_shift_mode(const std::string& text) {
  if (text.empty() || text == "irrational") return ShiftMode::irrational();
  std::vector<Fraction> alpha;
  for (const auto& part : split_commas(text)) alpha.push_back(Fraction::parse(part));
  return ShiftMode::rational(std::move(alpha));
}

int cmd_limit_mc(const Options& o, std::ostream& out) {
  Emitter em(o, "limit-mc", out);
  const auto w = o.window.empty() ? CongruenceWindow::exact(FamilySpec::primitive(2)) : load_window(o.window);
  const auto lw = level_window(w, o.level);
  const auto mode = parse_shift_mode(o.shift);
  const unsigned jobs = effective_jobs(o.jobs);
  auto& params = em.manifest().parameters;
  params = {{"mode", o.mode}, {"window", lw.description}, {"level", lw.residues.modulus()},
            {"shift", mode.describe()}, {"samples", o.samples}, {"epsilon", lw.epsilon}};
  em.manifest().config_hash = sha256_hex(lw.description + "|" + mode.describe()).substr(0, 16);
  if (o.mode == "fpl") {
    const auto grid = uniform_grid(o.xi_max, o.xi_step);
    const auto lim = limit_fpl_mc(grid, lw.residues, mode, o.samples, o.seed, jobs);
    CsvTable table({"xi", "survival", "stderr"});
    for (std::size_t i = 0; i < grid.size(); ++i) table.add_numbers({grid[i], lim.survival[i], lim.stderr[i]});
    std::optional<std::string> svg;
    if (!o.svg.empty()) {
      svg = emit_svg(lim.first_entry, {PlotKind::kCdf, "limit free path length", "xi", "cumulative fraction",
                                       o.xi_max, 0.1});
    }
    params["xi_max"] = o.xi_max;
    em.manifest().streams = {"homogeneous.limit_fpl"};
    em.finish(table, svg);
  } else if (o.mode == "dir") {
    const auto dist = limit_dir_mc(o.sigma, o.c, lw.residues, mode, o.samples, o.seed, jobs);
    CsvTable table({"r", "prob", "stderr"});
    for (unsigned r = 0; r <= o.r_max; ++r) {
      table.add_row({std::to_string(r), format_number(dist.prob(r)), format_number(dist.prob_stderr(r))});
    }
    std::optional<std::string> svg;
    if (!o.svg.empty()) {
      svg = emit_svg(dist, {PlotKind::kBars, "limit direction counts", "r", "probability",
                            static_cast<double>(o.r_max), 1.0});
    }
    params["sigma"] = o.sigma;
    params["c"] = o.c;
    em.manifest().streams = {"homogeneous.limit_dir"};
    em.finish(table, svg);
  } else {
    throw ConfigError("--mode must be fpl or dir");
  }
  return kExitOk;
}

int cmd_siegel_check(const Options& o, std::ostream& out) {
  Emitter em(o, "siegel-check", out);
  const std::uint64_t level = o.level == 0 ? 1 : o.level;
  CongruenceWindow w = o.window.empty() ? CongruenceWindow::exact(FamilySpec::primitive(2)) : load_window(o.window);
  if (o.window.empty() && level == 1) w = CongruenceWindow::trivial(2);
  const auto lw = level_window(w, level);
  const auto rows = siegel_check(lw.residues, o.samples, o.seed, o.boxes, effective_jobs(o.jobs));
  CsvTable table({"region", "expected", "empirical", "stderr", "zscore"});
  for (const auto& r : rows) {
    table.add_row({r.region, format_number(r.expected), format_number(r.empirical), format_number(r.stderr),
                   format_number(r.zscore)});
  }
  if (!o.out.empty()) out << table.str();
  em.manifest().config_hash = sha256_hex(lw.description).substr(0, 16);
  em.manifest().parameters = {{"window", lw.description}, {"level", lw.residues.modulus()},
                              {"samples", o.samples}, {"boxes", o.boxes}, {"epsilon", lw.epsilon}};
  em.manifest().streams = {"homogeneous.siegel.boxes", "homogeneous.siegel.linear", "homogeneous.siegel.affine"};
  em.finish(table);
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& o, bool config, bool svg) {
  if (config) cmd->add_option("--config", o.config, "Point-set configuration (TOML)")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output CSV path (stdout when omitted)");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");
  if (svg) cmd->add_option("--svg", o.svg, "Also write an SVG plot");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fine-scale statistics of arithmetic cut-and-project point sets", "latstat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));
  Options o;

  auto* measure = app.add_subcommand("measure", "Haar measure of a congruence window");
  measure->add_option("--window", o.window, "Window file (TOML)")->required()->check(CLI::ExistingFile);
  add_common(measure, o, false, false);

  auto* gen = app.add_subcommand("gen", "Enumerate the point set in the annulus c T < |y| < T");
  add_common(gen, o, true, false);
  gen->get_option("--config")->required();

  auto* dirs = app.add_subcommand("dirs", "Local statistics of directions in random caps");
  add_common(dirs, o, true, true);
  dirs->add_option("--sigma", o.sigma, "Expected number of directions per cap");
  dirs->add_option("--draws", o.draws, "Number of random caps");
  dirs->add_option("--r-max", o.r_max, "Largest count reported");

  auto* gaps = app.add_subcommand("gaps", "Normalized gap distribution of planar directions");
  add_common(gaps, o, true, true);
  gaps->get_option("--config")->required();
  gaps->add_option("--gap-max", o.gap_max, "Largest gap on the CDF grid");
  gaps->add_option("--gap-step", o.gap_step, "CDF grid spacing");

  auto* fpl = app.add_subcommand("fpl", "Free path lengths in the Boltzmann-Grad scaling");
  add_common(fpl, o, true, true);
  fpl->get_option("--config")->required();
  fpl->add_option("--rho", o.rho, "Scatterer radius");
  fpl->add_option("--xi-max", o.xi_max, "Largest rescaled path length on the grid");
  fpl->add_option("--xi-step", o.xi_step, "Grid spacing");
  fpl->add_option("--dirs", o.dirs, "Number of random directions");
  fpl->add_option("--q", o.q, "Initial point, comma separated (overrides the config)");

  auto* limit = app.add_subcommand("limit-mc", "Monte Carlo evaluation of the limit distributions");
  add_common(limit, o, false, true);
  limit->add_option("--mode", o.mode, "fpl or dir")->required()->check(CLI::IsMember({"fpl", "dir"}));
  limit->add_option("--level", o.level, "Level N (exact windows are truncated to its primes)");
  limit->add_option("--window", o.window, "Window file (TOML); primitive by default")->check(CLI::ExistingFile);
  limit->add_option("--samples", o.samples, "Number of sampled lattices");
  limit->add_option("--shift", o.shift, "'irrational' or a rational shift such as 1/2,1/2");
  limit->add_option("--xi-max", o.xi_max, "Largest xi on the grid (fpl)");
  limit->add_option("--xi-step", o.xi_step, "Grid spacing (fpl)");
  limit->add_option("--sigma", o.sigma, "Cone volume times window density (dir)");
  limit->add_option("--c", o.c, "Inner radius ratio of the cone (dir)");
  limit->add_option("--r-max", o.r_max, "Largest count reported (dir)");

  auto* siegel = app.add_subcommand("siegel-check", "Check the mean value identities on random boxes");
  add_common(siegel, o, false, false);
  siegel->add_option("--level", o.level, "Level N");
  siegel->add_option("--window", o.window, "Window file (TOML); primitive at level N by default")
      ->check(CLI::ExistingFile);
  siegel->add_option("--samples", o.samples, "Number of sampled lattices");
  siegel->add_option("--boxes", o.boxes, "Number of random boxes besides [-1,1]^2");

  auto* figure = app.add_subcommand("reproduce-figure", "Regenerate a gap-distribution figure");
  add_common(figure, o, false, true);
  figure->add_option("--figure", o.figure,
                     "gaps-halfshift, gaps-irrational, gaps-squarefree-halfshift or gaps-squarefree-irrational")
      ->required();
  figure->add_option("--T", o.T, "Radius of the disc");

  std::vector<std::string> storage{"latstat"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "latstat: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitConfig;
  }

  try {
    if (*measure) return cmd_measure(o, out);
    if (*gen) return cmd_gen(o, out);
    if (*dirs) return cmd_dirs(o, out);
    if (*gaps) return cmd_gaps(o, out);
    if (*fpl) return cmd_fpl(o, out);
    if (*limit) return cmd_limit_mc(o, out);
    if (*siegel) return cmd_siegel_check(o, out);
    if (*figure) return cmd_reproduce_figure(o, out);
  } catch (const ConfigError& e) {
    err << "latstat: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedError& e) {
    err << "latstat: unsupported: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "latstat: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceLimitError& e) {
    err << "latstat: refused: " << e.what() << "\n";
    return kExitResource;
  } catch (const LevelRaiseError& e) {
    err << "latstat: refused: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    err << "latstat: error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace latstat::tools
