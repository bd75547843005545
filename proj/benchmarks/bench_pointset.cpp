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

#include "latstat/directions.hpp"
#include "latstat/pointset.hpp"
#include "latstat/primes.hpp"

namespace {

using namespace latstat;

void BM_PrimeSieve(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(primes_up_to(static_cast<std::uint32_t>(state.range(0))));
}
BENCHMARK(BM_PrimeSieve)->Arg(1 << 16)->Arg(1'000'000);

void BM_EnumerateVisible(benchmark::State& state) {
  PointConfig cfg;
  cfg.window = CongruenceWindow::exact(FamilySpec::primitive(2));
  cfg.T = static_cast<double>(state.range(0));
  std::size_t n = 0;
  for (auto _ : state) n = enumerate(cfg).count;
  state.counters["points"] = static_cast<double>(n);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_EnumerateVisible)->Arg(100)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EnumerateShiftedTruncated(benchmark::State& state) {
  PointConfig cfg;
  cfg.window = CongruenceWindow::truncated(FamilySpec::primitive(2), {2, 3, 5});
  cfg.alpha = Shift::parse({"sqrt2", "sqrt3"});
  cfg.T = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate(cfg).count);
}
BENCHMARK(BM_EnumerateShiftedTruncated)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_GapDistribution(benchmark::State& state) {
  PointConfig cfg;
  cfg.window = CongruenceWindow::exact(FamilySpec::primitive(2));
  cfg.alpha = Shift::parse({"1/2", "1/2"});
  cfg.T = static_cast<double>(state.range(0));
  const auto batch = enumerate(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(gap_distribution(project_directions(batch)).mean());
}
BENCHMARK(BM_GapDistribution)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
