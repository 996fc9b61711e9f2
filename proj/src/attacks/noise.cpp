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

#include <cmath>
#include <random>

#include "recess/attacks.hpp"
#include "recess/error.hpp"

namespace recess {

Image gaussian_noise(const Image& image, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("gaussian sigma must be >= 0");
  }
  if (sigma == 0.0) return image;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> out(image.pixels().begin(), image.pixels().end());
  for (double& v : out) v += noise(rng);
  return Image::clamped(image.shape(), std::move(out));
}

Image poisson_noise(const Image& image, double scale, std::uint64_t seed) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParameterError("poisson scale must be > 0");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> out(image.pixels().begin(), image.pixels().end());
  for (double& v : out) {
    const double mean = v * scale;
    if (mean <= 0.0) {
      v = 0.0;
      continue;
    }
    std::poisson_distribution<long long> counts(mean);
    v = static_cast<double>(counts(rng)) / scale;
  }
  return Image::clamped(image.shape(), std::move(out));
}

Image salt_pepper(const Image& image, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("salt-and-pepper probability must lie in [0,1]");
  }
  if (p == 0.0) return image;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution replace(p);
  std::bernoulli_distribution salt(0.5);
  std::vector<double> out(image.pixels().begin(), image.pixels().end());
  for (double& v : out) {
    if (replace(rng)) v = salt(rng) ? 1.0 : 0.0;
  }
  return Image(image.shape(), std::move(out));
}

}  // namespace recess
