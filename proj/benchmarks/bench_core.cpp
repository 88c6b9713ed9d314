// Copyright 2026 The fdtrinicon Authors.
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


#include <random>
#include <span>
#include <vector>

#include <benchmark/benchmark.h>

#include "fdtrinicon/bss_eval.hpp"
#include "fdtrinicon/room.hpp"
#include "fdtrinicon/trinicon.hpp"

using namespace fdtrinicon;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

MultichannelSignal stereo_noise(std::size_t n) {
  return MultichannelSignal({noise(n, 1), noise(n, 2)}, 16000.0);
}

void BM_ForwardFilter(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  const auto x = stereo_noise(160000);
  DemixingFilter f(len);
  for (std::size_t pq = 0; pq < 4; ++pq) {
    auto w = noise(len, 10 + pq);
    std::copy(w.begin(), w.end(), f.w(pq / 2, pq % 2).begin());
  }
  for (auto _ : state) benchmark::DoNotOptimize(forward_filter(f, x));
  state.SetItemsProcessed(state.iterations() * 160000);
}
BENCHMARK(BM_ForwardFilter)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_TriniconIteration(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  const auto x = stereo_noise(160000);
  TriniconConfig c;
  c.filter_len = len;
  c.iterations = 1;
  c.early_stop_window = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_offline(x, c));
}
BENCHMARK(BM_TriniconIteration)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_GenerateRir(benchmark::State& state) {
  RoomScenario s;
  s.rt60 = static_cast<double>(state.range(0)) / 1000.0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_rir(s, 0, 0));
}
BENCHMARK(BM_GenerateRir)->Arg(150)->Arg(350)->Unit(benchmark::kMillisecond);

void BM_Score(benchmark::State& state) {
  const std::size_t n = 160000;
  const auto a = noise(n, 3), b = noise(n, 4), y1 = noise(n, 5), y2 = noise(n, 6);
  const std::array<std::span<const double>, 2> refs{a, b};
  const std::array<std::span<const double>, 2> out{y1, y2};
  const auto proj = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(score(out, refs, proj));
}
BENCHMARK(BM_Score)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
