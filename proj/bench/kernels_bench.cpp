/*
 * Copyright 2026 The Recess Authors.
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

// Serial reference vs OpenMP kernels. Both variants compute identical
// results; the parallel one only splits work across threads for planes of
// 64x64 and larger.

#include <benchmark/benchmark.h>

#include <random>

#include "recess/filters.hpp"
#include "recess/transform.hpp"

namespace {

using namespace recess;

Matrix random_matrix(std::size_t side) {
  std::mt19937_64 rng(side);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(side, side);
  for (double& v : m.data) v = u(rng);
  return m;
}

Image random_image(std::size_t side) {
  std::mt19937_64 rng(side + 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Shape shape{side, side, 3};
  std::vector<double> px(shape.size());
  for (double& v : px) v = u(rng);
  return Image(shape, px);
}

template <bool kParallel>
void BM_Dct2(benchmark::State& state) {
  const Matrix m = random_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kParallel ? dct2(m) : serial::dct2(m));
  }
}

template <bool kParallel>
void BM_FeatureFilter(benchmark::State& state) {
  const Image img = random_image(static_cast<std::size_t>(state.range(0)));
  const FilterSpec spec(0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kParallel ? feature_filter(img, spec)
                                       : serial::feature_filter(img, spec));
  }
}

template <bool kParallel>
void BM_Median(benchmark::State& state) {
  const Image img = random_image(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kParallel ? median_smooth(img, 3) : serial::median_smooth(img, 3));
  }
}

template <bool kParallel>
void BM_NonLocalMean(benchmark::State& state) {
  const Image img = random_image(static_cast<std::size_t>(state.range(0)));
  const double h = 4.0 / 255.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kParallel ? non_local_mean(img, 11, 3, h)
                                       : serial::non_local_mean(img, 11, 3, h));
  }
}

BENCHMARK(BM_Dct2<false>)->Arg(32)->Arg(224);
BENCHMARK(BM_Dct2<true>)->Arg(32)->Arg(224);
BENCHMARK(BM_FeatureFilter<false>)->Arg(32)->Arg(224);
BENCHMARK(BM_FeatureFilter<true>)->Arg(32)->Arg(224);
BENCHMARK(BM_Median<false>)->Arg(32)->Arg(224);
BENCHMARK(BM_Median<true>)->Arg(32)->Arg(224);
BENCHMARK(BM_NonLocalMean<false>)->Arg(32)->Arg(96);
BENCHMARK(BM_NonLocalMean<true>)->Arg(32)->Arg(96);

}  // namespace

BENCHMARK_MAIN();
