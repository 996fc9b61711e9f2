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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "recess/error.hpp"
#include "recess/filters.hpp"
#include "recess/metrics.hpp"

namespace recess {

BenchResult bench_filter(const Shape& shape, std::size_t repetitions, double alpha,
                         std::uint64_t seed, Predictor* predictor) {
  if (repetitions < 10) throw ParameterError("benchmark needs at least 10 repetitions");
  const FilterSpec spec(alpha);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pixel(0.0, 1.0);

  std::vector<Image> inputs;
  inputs.reserve(repetitions);
  for (std::size_t r = 0; r < repetitions; ++r) {
    std::vector<double> values(shape.size());
    for (double& v : values) v = pixel(rng);
    inputs.emplace_back(shape, std::move(values));
  }

  // Warm the cosine tables so the first repetition is not an outlier.
  (void)feature_filter(inputs.front(), spec);

  std::vector<double> seconds;
  seconds.reserve(repetitions);
  BenchResult result;
  result.repetitions = repetitions;
  for (const Image& image : inputs) {
    const auto start = std::chrono::steady_clock::now();
    const Image filtered = feature_filter(image, spec);
    if (predictor != nullptr) {
      (void)predictor->predict(image);
      (void)predictor->predict(filtered);
    }
    const auto stop = std::chrono::steady_clock::now();
    seconds.push_back(std::chrono::duration<double>(stop - start).count());
    result.operation_count += feature_filter_cost(shape, spec);
  }
  result.mean_seconds =
      std::accumulate(seconds.begin(), seconds.end(), 0.0) / static_cast<double>(repetitions);
  std::sort(seconds.begin(), seconds.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(repetitions)));
  result.p95_seconds = seconds[std::max<std::size_t>(rank, 1) - 1];
  return result;
}

}  // namespace recess
