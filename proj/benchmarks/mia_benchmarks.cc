// Copyright 2026 The MIA Disparity Authors
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
#include <random>

#include "benchmark/benchmark.h"
#include "mia/disparity.h"
#include "mia/ensemble.h"
#include "mia/metrics.h"
#include "mia/simulator.h"

namespace mia {
namespace {

SimConfig BenchConfig(size_t n) {
  SimConfig c;
  c.n_samples = n;
  c.emit_signals = false;
  c.seed = 1;
  return c;
}

void BM_ComputeRoc(benchmark::State& state) {
  const ExperimentBundle b = *Generate(BenchConfig(state.range(0)));
  const auto scores = b.attacks.at("attack_0").values.row(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeRoc(b.ground_truth, scores));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComputeRoc)->Arg(1000)->Arg(20000)->Arg(200000);

void BM_AdjustFprGrid(benchmark::State& state) {
  const ExperimentBundle b = *Generate(BenchConfig(state.range(0)));
  const auto scores = b.attacks.at("attack_0").values.row(0);
  const std::vector<double> grid = DefaultFprGrid();
  for (auto _ : state) {
    for (double beta : grid) benchmark::DoNotOptimize(AdjustFpr(b.ground_truth, scores, beta));
  }
}
BENCHMARK(BM_AdjustFprGrid)->Arg(20000);

void BM_Consistency(benchmark::State& state) {
  const ExperimentBundle b = *Generate(BenchConfig(20000));
  const PredictionMatrix pm =
      *CalibratePredictions(b.attacks.at("attack_0"), b.ground_truth, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(Consistency(pm, b.ground_truth));
}
BENCHMARK(BM_Consistency);

void BM_EnsembleSweep(benchmark::State& state) {
  const ExperimentBundle b = *Generate(BenchConfig(20000));
  const EnsembleSpec spec{EnsembleStrategy::kStability, b.attack_names(), 6};
  for (auto _ : state) benchmark::DoNotOptimize(EnsembleRocSweep(b, spec));
}
BENCHMARK(BM_EnsembleSweep)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  SimConfig c = BenchConfig(state.range(0));
  c.emit_signals = true;
  for (auto _ : state) benchmark::DoNotOptimize(Generate(c));
}
BENCHMARK(BM_Simulate)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace mia

BENCHMARK_MAIN();
