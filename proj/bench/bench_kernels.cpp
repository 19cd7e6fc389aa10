// Copyright 2026 The kmmc Authors
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

// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "kmmc/ensemble.hpp"
#include "kmmc/kinetic/boltzmann.hpp"
#include "kmmc/sampler.hpp"

namespace {

using namespace kmmc;

ProposalKernel walk() {
  return ProposalKernel(ProposalKind::custom, [](const ProposalContext& c, Rng& rng) {
    ParameterPoint p = c.current;
    for (double& v : p) v = rng.normal(v, 0.5);
    return p;
  });
}

AcceptanceRule toward_origin() {
  return AcceptanceRule(AcceptanceKind::custom, [](const AcceptanceContext& c) {
    const double lp = std::exp(-0.5 * c.proposal[0] * c.proposal[0]);
    const double ln = std::exp(-0.5 * c.current[0] * c.current[0]);
    return lp / (lp + ln);
  });
}

const InitialSampler kInit = [](Rng& rng) { return ParameterPoint{rng.uniform(-2.0, 2.0), 0.0}; };

template <bool Parallel>
void BM_Ensemble(benchmark::State& state) {
  const EnsembleSpec spec{static_cast<std::size_t>(state.range(0)), {50}, 1, kDefaultMaxRetries};
  const auto tau = walk();
  const auto alpha = toward_origin();
  for (auto _ : state) {
    auto r = Parallel ? simulate_ensemble(spec, tau, alpha, kInit) : simulate_ensemble_serial(spec, tau, alpha, kInit);
    benchmark::DoNotOptimize(r.accepted);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 50);
}

kinetic::KernelGrid dense_kernel(std::size_t m) {
  const kinetic::Grid grid(-5.0, 5.0, m);
  std::vector<double> v(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double d = grid.center(i) - grid.center(j);
      v[i * m + j] = std::exp(-2.0 * d * d) / (1.0 + std::exp(grid.center(i) - grid.center(j)));
    }
  return kinetic::KernelGrid(grid, std::move(v));
}

template <bool Parallel>
void BM_Generator(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto k = dense_kernel(m);
  std::vector<double> f(m, 0.1);
  for (auto _ : state) {
    auto q = Parallel ? kinetic::apply_generator(k, f) : kinetic::apply_generator_serial(k, f);
    benchmark::DoNotOptimize(q.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m * m));
}

}  // namespace

BENCHMARK(BM_Ensemble<false>)->Name("ensemble/serial")->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ensemble<true>)->Name("ensemble/openmp")->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Generator<false>)->Name("generator/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Generator<true>)->Name("generator/openmp")->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
