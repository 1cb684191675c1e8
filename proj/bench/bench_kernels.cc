/*
 * Copyright 2026 The hpspake Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference vs OpenMP path for each data-parallel kernel. The
// second argument of every benchmark selects the policy: 0 serial,
// 1 parallel.

#include <benchmark/benchmark.h>

#include "hpspake/game.h"
#include "hpspake/parallel.h"
#include "hpspake/redball.h"
#include "hpspake/tag_phf.h"

namespace hpspake {
namespace {

ExecutionPolicy PolicyArg(const benchmark::State& state) {
  return state.range(0) ? ExecutionPolicy::kParallel : ExecutionPolicy::kSerial;
}

const PhfParams& Tiny() {
  static const PhfParams pp = *MakeToyParams(4, 1);
  return pp;
}

const PhfParams& Toy() {
  static const PhfParams pp = *MakeToyParams(16, 1);
  return pp;
}

const PhfParams& Hashed() {
  static const PhfParams pp = *MakeHashedParams(64, 1);
  return pp;
}

void BM_OptimalPlayGrid(benchmark::State& state) {
  for (auto _ : state) {
    OptimalPlayGridReport rep = CheckOptimalPlayGrid(4, 6, 16, PolicyArg(state));
    benchmark::DoNotOptimize(rep.cells);
  }
}
BENCHMARK(BM_OptimalPlayGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SimulateGreedy(benchmark::State& state) {
  auto inst = *RedBallInstance::Make(std::vector<int>(32, 16), 96, 10);
  for (auto _ : state) {
    SimulationResult r = SimulateGreedy(inst, 1 << 16, 1, PolicyArg(state));
    benchmark::DoNotOptimize(r.successes);
  }
}
BENCHMARK(BM_SimulateGreedy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Universal2(benchmark::State& state) {
  Rng rng = Rng::FromSeed(2);
  Universal2Case c = SampleUniversal2Case(Tiny(), rng);
  for (auto _ : state) {
    auto rep = VerifyUniversal2Exhaustive(Tiny(), c, PolicyArg(state));
    benchmark::DoNotOptimize(rep->consistent_keys);
  }
}
BENCHMARK(BM_Universal2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LocalUniqueness(benchmark::State& state) {
  Rng rng = Rng::FromSeed(3);
  auto [sk, proj] = Keygen(Toy(), rng);
  for (auto _ : state) {
    auto rep = VerifyLocal1Uniqueness(Toy(), sk, 16, 500, 4, PolicyArg(state));
    benchmark::DoNotOptimize(rep.collisions);
  }
}
BENCHMARK(BM_LocalUniqueness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GuessingTrials(benchmark::State& state) {
  GuessingConfig cfg;
  cfg.trials = 500;
  for (auto _ : state) {
    auto rep = RunOnlineGuessing(Hashed(), cfg, PolicyArg(state));
    benchmark::DoNotOptimize(rep->successes);
  }
}
BENCHMARK(BM_GuessingTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PersistencyTrials(benchmark::State& state) {
  PersistencyConfig cfg;
  cfg.trials = 100;
  for (auto _ : state) {
    auto rep = RunPersistency(Hashed(), cfg, PolicyArg(state));
    benchmark::DoNotOptimize(rep->successes);
  }
}
BENCHMARK(BM_PersistencyTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace hpspake

BENCHMARK_MAIN();
