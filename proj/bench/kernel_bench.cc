// Copyright 2026 The Forge Authors
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


// Parallel vs serial timings for the numeric kernels.

#include <benchmark/benchmark.h>

#include "forge/math/kernels.h"
#include "forge/util/rng.h"

namespace {

using forge::math::Matrix;

Matrix random_matrix(size_t r, size_t c, uint64_t seed) {
  forge::Rng rng(seed);
  Matrix m(r, c);
  for (double& x : m.data()) x = rng.normal();
  return m;
}

template <bool kParallel>
void BM_Affine(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  const Matrix x = random_matrix(n, 46, 1);
  const Matrix w = random_matrix(256, 46, 2);
  const std::vector<double> b(256, 0.1);
  Matrix y;
  for (auto _ : state) {
    if constexpr (kParallel) {
      forge::math::affine(x, w, b, y);
    } else {
      forge::math::affine_serial(x, w, b, y);
    }
    benchmark::DoNotOptimize(y.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_Affine<true>)->Arg(8)->Arg(512)->Arg(4096);
BENCHMARK(BM_Affine<false>)->Arg(8)->Arg(512)->Arg(4096);

template <bool kParallel>
void BM_Covariance(benchmark::State& state) {
  const Matrix x = random_matrix(static_cast<size_t>(state.range(0)), 128, 3);
  for (auto _ : state) {
    std::vector<double> mean;
    Matrix c = kParallel ? forge::math::covariance(x, &mean) : forge::math::covariance_serial(x, &mean);
    benchmark::DoNotOptimize(c.data().data());
  }
}
BENCHMARK(BM_Covariance<true>)->Arg(256)->Arg(2048);
BENCHMARK(BM_Covariance<false>)->Arg(256)->Arg(2048);

template <bool kParallel>
void BM_ThresholdCounts(benchmark::State& state) {
  forge::Rng rng(4);
  const size_t n = static_cast<size_t>(state.range(0));
  std::vector<double> scores(n);
  std::vector<int> labels(n);
  for (size_t i = 0; i < n; ++i) {
    scores[i] = rng.uniform();
    labels[i] = rng.uniform() < scores[i];
  }
  std::vector<double> thresholds;
  for (int t = 0; t <= 100; ++t) thresholds.push_back(t / 100.0);
  for (auto _ : state) {
    auto c = kParallel ? forge::math::threshold_counts(scores, labels, thresholds)
                       : forge::math::threshold_counts_serial(scores, labels, thresholds);
    benchmark::DoNotOptimize(c.data());
  }
}
BENCHMARK(BM_ThresholdCounts<true>)->Arg(10000)->Arg(100000);
BENCHMARK(BM_ThresholdCounts<false>)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
