// benchmarks/stft_bench.cc

// Copyright 2026  The cidnn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "cidnn/stft.h"

namespace {

cidnn::TimeSignal Noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 0.1);
  cidnn::TimeSignal x(n);
  for (double& v : x) v = g(rng);
  return x;
}

void BM_Analyze(benchmark::State& state) {
  const cidnn::TimeSignal x = Noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cidnn::Analyze(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Analyze)->Arg(16000)->Arg(160000);

void BM_Synthesize(benchmark::State& state) {
  const cidnn::Spectrogram s = cidnn::Analyze(Noise(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(cidnn::Synthesize(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Synthesize)->Arg(16000)->Arg(160000);

}  // namespace

BENCHMARK_MAIN();
