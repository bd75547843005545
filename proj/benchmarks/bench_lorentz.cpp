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

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "latstat/lorentz.hpp"
#include "latstat/rng.hpp"

namespace {

using namespace latstat;

// Mean cost of one flight from a fixed point over random directions; the
// expected path length grows like 1/rho.
void BM_FreePath(benchmark::State& state) {
  const double rho = 1.0 / static_cast<double>(state.range(0));
  PointConfig cfg;
  cfg.window = CongruenceWindow::exact(FamilySpec::primitive(2));
  const double q[] = {std::numbers::sqrt2 / 10, std::numbers::sqrt3 / 10};
  const ScattererField field(cfg, rho, q);
  CounterRng rng(stream_key(1, "bench.free_path"), 0);
  std::uint64_t slabs = 0;
  for (auto _ : state) {
    const double th = 2 * std::numbers::pi * rng.uniform();
    const double v[] = {std::cos(th), std::sin(th)};
    const auto r = free_path(field, q, v, 21 / rho);
    slabs += r.slabs;
    benchmark::DoNotOptimize(r.tau);
  }
  state.counters["slabs/flight"] = benchmark::Counter(static_cast<double>(slabs), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_FreePath)->Arg(10)->Arg(100)->Arg(200)->Arg(1000);

}  // namespace
