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

#include "benchmark/benchmark.h"
#include "shiftgrad/quantum.hpp"

namespace {

using namespace shiftgrad;

void BM_Expectation(benchmark::State& state) {
  const quantum::NamedTemplate t = quantum::named_template("crx-zz");
  const quantum::Circuit bound = t.circuit.bind(0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantum::expectation(bound, t.observable));
  }
}
BENCHMARK(BM_Expectation);

void BM_FourTermPsr(benchmark::State& state) {
  const quantum::NamedTemplate t = quantum::named_template("crx-zz");
  BlackBoxFunction f = quantum::expectation_as_blackbox(t.circuit, t.observable);
  const auto params = FourTermPsrParams::controlled_rotation_defaults();
  const double mu[] = {0.7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(psr_four_term(f, mu, params));
  }
}
BENCHMARK(BM_FourTermPsr);

}  // namespace
