// Copyright 2026 The Surprisal Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "surprisal/detect.h"
#include "surprisal/dsa.h"
#include "surprisal/lsa.h"
#include "surprisal/npy.h"
#include "surprisal/rng.h"

namespace {

using namespace surprisal;

Matrix random_matrix(std::uint64_t seed, std::size_t rows, std::size_t cols) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

TraceSet two_class(std::uint64_t seed, std::size_t rows, std::size_t cols) {
  std::vector<ClassLabel> labels(rows);
  for (std::size_t i = 0; i < rows; ++i) labels[i] = ClassLabel{static_cast<std::int64_t>(i % 2)};
  return TraceSet(random_matrix(seed, rows, cols), {LayerSpec{"all", cols, 0}}, std::nullopt,
                  labels);
}

// Args: training rows, dimension. 100 queries per iteration.
void BM_LsaBatch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const TraceSet train = two_class(1, n, d);
  const TraceSet queries = two_class(2, 100, d);
  const TrainingProfile profile = build_profile(train, NeuronSelector::all());
  const std::vector<DensityModel> models = fit_kde(train, profile, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lsa_batch(models, queries, profile, QueryClass::kPredicted));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_LsaBatch)->Args({1000, 10})->Args({1000, 64})->Args({10000, 10});

void BM_FitKde(benchmark::State& state) {
  const TraceSet train = two_class(3, static_cast<std::size_t>(state.range(0)), 64);
  const TrainingProfile profile = build_profile(train, NeuronSelector::all());
  for (auto _ : state) benchmark::DoNotOptimize(fit_kde(train, profile, true));
}
BENCHMARK(BM_FitKde)->Arg(1000)->Arg(10000);

void BM_DsaBatch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const ClassIndex index = build_class_index(two_class(4, n, d), NeuronSelector::all());
  const TraceSet queries = two_class(5, 100, d);
  for (auto _ : state) benchmark::DoNotOptimize(dsa_batch(index, queries));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_DsaBatch)->Args({1000, 10})->Args({10000, 10})->Args({10000, 128});

void BM_RocAuc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(6);
  std::vector<double> scores(n);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<std::uint8_t>(i % 2);
    scores[i] = rng.normal() + labels[i];
  }
  for (auto _ : state) benchmark::DoNotOptimize(roc_auc(scores, labels));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RocAuc)->Range(1 << 10, 1 << 20);

void BM_NpyRoundTrip(benchmark::State& state) {
  const Matrix m = random_matrix(7, static_cast<std::size_t>(state.range(0)), 128);
  for (auto _ : state) benchmark::DoNotOptimize(parse_array(serialize_array(m)));
  state.SetBytesProcessed(state.iterations() * state.range(0) * 128 * 8);
}
BENCHMARK(BM_NpyRoundTrip)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
