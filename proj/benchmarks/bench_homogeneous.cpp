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

#include "latstat/homogeneous.hpp"

namespace {

using namespace latstat;

ResidueWindow primitive30() {
  return reduce_mod_level(CongruenceWindow::truncated(FamilySpec::primitive(2), {2, 3, 5}));
}

void BM_SampleMarkedAffine(benchmark::State& state) {
  const SL2Sampler sampler(static_cast<std::uint64_t>(state.range(0)));
  CounterRng rng(stream_key(1, "bench.marked"), 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_marked_affine(sampler, rng));
}
BENCHMARK(BM_SampleMarkedAffine)->Arg(30)->Arg(210);

void BM_SL2SamplerSetup(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(SL2Sampler(static_cast<std::uint64_t>(state.range(0))).order());
}
BENCHMARK(BM_SL2SamplerSetup)->Arg(30)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_CountInCylinder(benchmark::State& state) {
  const auto window = primitive30();
  const SL2Sampler sampler(30);
  const auto cylinder = Region::cylinder(static_cast<double>(state.range(0)));
  CounterRng rng(stream_key(2, "bench.count"), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(marked_points_in_region(sample_marked_affine(sampler, rng), window, cylinder));
  }
}
BENCHMARK(BM_CountInCylinder)->Arg(1)->Arg(20);

void BM_LimitFpl(benchmark::State& state) {
  const auto window = primitive30();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        limit_fpl_mc({0.5, 1, 2, 10, 20}, window, ShiftMode::irrational(), 10000, 1).survival.back());
  }
}
BENCHMARK(BM_LimitFpl)->Unit(benchmark::kMillisecond);

}  // namespace
