// Copyright 2026 The qdimer Authors
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

#include <benchmark/benchmark.h>

#include "qdimer/measure.hpp"
#include "qdimer/model.hpp"
#include "qdimer/reff.hpp"
#include "qdimer/spectra.hpp"
#include "qdimer/trotter.hpp"

namespace {

using namespace qdimer;

const SpinModel kModel = SpinModel::heisenberg(1.0, 1.0);

ReffAnsatz trained() {
  static const ReffAnsatz a = [] {
    Rng rng(42);
    OptimizerConfig cfg;
    cfg.cost_threshold = 1e-12;
    return train(trotter_step_circuit(kModel, 0.3).to_matrix(), cfg, rng).ansatz();
  }();
  return a;
}

void BM_Eigensystem(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(eigensystem(kModel));
}
BENCHMARK(BM_Eigensystem);

void BM_TrotterEvolutionMatrix(benchmark::State& state) {
  const Circuit c = trotter_evolution(kModel, 0.3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(c.to_matrix());
}
BENCHMARK(BM_TrotterEvolutionMatrix)->Arg(1)->Arg(10)->Arg(100);

void BM_ReffFastForward(benchmark::State& state) {
  const ReffAnsatz a = trained();
  for (auto _ : state) benchmark::DoNotOptimize(a.unitary(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ReffFastForward)->Arg(1)->Arg(100);

void BM_CostGradient(benchmark::State& state) {
  Rng rng(1);
  const TrainingSet ts = TrainingSet::haar_product(6, 2, rng);
  const CMatrix target = trotter_step_circuit(kModel, 0.3).to_matrix();
  const ReffAnsatz a = ReffAnsatz::dimer();
  for (auto _ : state) benchmark::DoNotOptimize(grad(target, a, ts));
}
BENCHMARK(BM_CostGradient);

void BM_Train(benchmark::State& state) {
  const CMatrix target = trotter_step_circuit(kModel, 0.3).to_matrix();
  OptimizerConfig cfg;
  cfg.cost_threshold = 1e-12;
  for (auto _ : state) {
    Rng rng(42);
    benchmark::DoNotOptimize(train(target, cfg, rng));
  }
}
BENCHMARK(BM_Train)->Unit(benchmark::kMillisecond);

void BM_Estimate(benchmark::State& state) {
  const Scheme scheme = state.range(0) == 0 ? Scheme::kIndirect : Scheme::kDirect;
  const Circuit evo = trotter_evolution(kModel, 0.3, static_cast<int>(state.range(1)));
  const QuantumState g = QuantumState::pure(ground_state(eigensystem(kModel)));
  EstimatorConfig cfg;
  cfg.scheme = scheme;
  cfg.noise = {0.001, 0.007, 0.01};
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(estimate(evo, {Axis::X, 0, Axis::X, 0}, g, cfg, rng));
}
BENCHMARK(BM_Estimate)->Args({0, 10})->Args({1, 10})->Args({0, 100})->Args({1, 100})->Unit(benchmark::kMicrosecond);

void BM_NoisySweep(benchmark::State& state) {
  SweepConfig sc;
  sc.model = kModel;
  sc.method = EvolutionMethod::kReff;
  sc.reff = trained();
  sc.keys = same_site_keys();
  EstimatorConfig cfg;
  cfg.noise = {0.001, 0.007, 0.01};
  sc.estimator = cfg;
  sc.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sweep(sc, Rng(4)));
}
BENCHMARK(BM_NoisySweep)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_PowerSpectrum(benchmark::State& state) {
  const CorrelationSeries s =
      lehmann_series(kModel, SeriesKey::parse("xx_1_1"), 0.3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(power_spectrum(s));
}
BENCHMARK(BM_PowerSpectrum)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
