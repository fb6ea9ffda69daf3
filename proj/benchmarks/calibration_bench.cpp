// Copyright 2026 The shiftgrad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include "benchmark/benchmark.h"
#include "shiftgrad/calibration.hpp"

namespace {

using namespace shiftgrad;

// Square grid of state.range(0) intervals per axis. Queries grow with n_E only.
void BM_GridSearch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  BlackBoxFunction f = make_counted_function(
      1, [](std::span<const double> x) { return x[0] * x[0] + std::cos(x[0] + 2.0); });
  const auto grid = CalibrationGrid::from_counts(2.0, 2.0, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_search_calibrate(f, -std::sin(2.0), 0.0, grid));
  }
  state.SetComplexityN(static_cast<std::int64_t>(n * n));
}

BENCHMARK(BM_GridSearch)->RangeMultiplier(2)->Range(10, 640)->Complexity(benchmark::oN);

}  // namespace
