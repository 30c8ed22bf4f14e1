// Copyright 2026 The vortexwm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "vortexwm/kernels.hpp"
#include "vortexwm/probefield.hpp"

namespace {

using namespace vortexwm;

const auto kField = exact_field({1.0, 0.05, 1}, state_from_angles(0.9, 1.2));

PixelGrid grid_for(const benchmark::State& st) {
  const auto n = static_cast<int>(st.range(0));
  return {n, n, 8.0 / static_cast<double>(n), {}};
}

void BM_RenderSerial(benchmark::State& st) {
  const auto grid = grid_for(st);
  std::vector<double> out(grid.size());
  for (auto _ : st) {
    kernels::serial::render_intensity(kField.function(), grid, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(grid.size()));
}

void BM_RenderParallel(benchmark::State& st) {
  const auto grid = grid_for(st);
  std::vector<double> out(grid.size());
  for (auto _ : st) {
    kernels::parallel::render_intensity(kField.function(), grid, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(grid.size()));
}

void BM_MomentsSerial(benchmark::State& st) {
  const auto grid = grid_for(st);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::intensity_moments(kField.function(), grid));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(grid.size()));
}

void BM_MomentsParallel(benchmark::State& st) {
  const auto grid = grid_for(st);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::parallel::intensity_moments(kField.function(), grid));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(grid.size()));
}

std::vector<double> mean_counts(const PixelGrid& grid) {
  std::vector<double> means(grid.size());
  kernels::serial::render_intensity(kField.function(), grid, means);
  double total = 0.0;
  for (double m : means) total += m;
  for (double& m : means) m *= 1e6 / total;
  return means;
}

void BM_PoissonSerial(benchmark::State& st) {
  const auto grid = grid_for(st);
  const auto means = mean_counts(grid);
  std::vector<double> out(means.size());
  for (auto _ : st) {
    kernels::serial::poisson_counts(means, 42, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(grid.size()));
}

void BM_PoissonParallel(benchmark::State& st) {
  const auto grid = grid_for(st);
  const auto means = mean_counts(grid);
  std::vector<double> out(means.size());
  for (auto _ : st) {
    kernels::parallel::poisson_counts(means, 42, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(grid.size()));
}

}  // namespace

BENCHMARK(BM_RenderSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MomentsSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PoissonSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PoissonParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
