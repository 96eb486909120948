// Copyright 2026 The omnivi Authors.
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

#include "omnivi/game_model.h"
#include "omnivi/learners.h"
#include "omnivi/matrix_equilibria.h"
#include "omnivi/regression.h"

namespace omnivi {
namespace {

Matrix RandomPayoff(Rng& rng, int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = 2.0 * rng.Uniform() - 1.0;
  return m;
}

void BM_SolveCce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const Matrix u1 = RandomPayoff(rng, n);
  const Matrix u2 = RandomPayoff(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(SolveCce(u1, u2));
}
BENCHMARK(BM_SolveCce)->Arg(2)->Arg(4)->Arg(8);

void BM_GramUpdate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(2);
  Vector phi = Vector::Zero(d);
  for (auto _ : state) {
    state.PauseTiming();
    GramState gram(d);
    state.ResumeTiming();
    for (int i = 0; i < 64; ++i) {
      phi.setZero();
      phi(rng.Below(d)) = 1.0;
      gram.Update(phi, 0, 0.5);
    }
    benchmark::DoNotOptimize(gram.inverse().data());
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_GramUpdate)->Arg(8)->Arg(32)->Arg(128);

void BM_OfflineEpisodes(benchmark::State& state) {
  Rng gen(3);
  const GameSpec spec = RandomSimplexGame(8, 4, 2, 3, gen);
  const int episodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    OfflineLearner learner(spec, {episodes, 0.2, 0.05});
    Environment env(spec, Rng(4));
    Rng rng(5);
    for (int k = 0; k < episodes; ++k)
      benchmark::DoNotOptimize(learner.RunEpisode(env, rng));
  }
  state.SetItemsProcessed(state.iterations() * episodes);
}
BENCHMARK(BM_OfflineEpisodes)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace omnivi

BENCHMARK_MAIN();
