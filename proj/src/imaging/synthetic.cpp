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

#include "recess/synthetic.hpp"

#include <cmath>
#include <random>

#include "recess/dataset_io.hpp"
#include "recess/error.hpp"
#include "recess/transform.hpp"

namespace recess {
namespace {

constexpr std::size_t kSide = 32;
constexpr std::size_t kChannels = 3;

using Coefficients = std::vector<double>;  // kSide * kSide, row-major (u, v)

std::vector<std::vector<Coefficients>> make_templates(const SynthConfig& config) {
  // Same 1/f amplitude law as the texture, so class evidence is spread over
  // the whole spectrum the way it is in photographs.
  std::mt19937_64 rng(config.template_seed);
  std::normal_distribution<double> coef(0.0, config.template_strength);
  std::vector<std::vector<Coefficients>> templates(config.num_classes);
  for (auto& per_class : templates) {
    per_class.assign(kChannels, Coefficients(kSide * kSide, 0.0));
    for (auto& channel : per_class) {
      for (std::size_t u = 0; u < kSide; ++u) {
        for (std::size_t v = 0; v < kSide; ++v) {
          if (u == 0 && v == 0) continue;
          const double f = std::sqrt(static_cast<double>(u * u + v * v));
          channel[u * kSide + v] = coef(rng) / f;
        }
      }
    }
  }
  return templates;
}

Coefficients pink_texture(std::mt19937_64& rng, double amplitude) {
  std::normal_distribution<double> unit(0.0, 1.0);
  Coefficients out(kSide * kSide, 0.0);
  for (std::size_t u = 0; u < kSide; ++u) {
    for (std::size_t v = 0; v < kSide; ++v) {
      if (u == 0 && v == 0) continue;
      const double f = std::sqrt(static_cast<double>(u * u + v * v));
      out[u * kSide + v] = amplitude * unit(rng) / f;
    }
  }
  return out;
}

}  // namespace

LabeledDataset synthesize_dataset(const SynthConfig& config) {
  if (config.num_classes < 1 || config.num_classes > kCifarClasses) {
    throw ParameterError("synthetic dataset supports 1..10 classes");
  }
  const auto templates = make_templates(config);
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> pick_class(0, config.num_classes - 1);
  std::uniform_real_distribution<double> gain(0.5, 1.5);
  std::normal_distribution<double> brightness(0.0, 0.08);
  std::uniform_real_distribution<double> tint(0.8, 1.2);

  const Shape shape{kSide, kSide, kChannels};
  LabeledDataset dataset;
  dataset.num_classes = config.num_classes;
  dataset.images.reserve(config.count);
  dataset.labels.reserve(config.count);

  for (std::size_t n = 0; n < config.count; ++n) {
    const int label = pick_class(rng);
    const double g = gain(rng);
    const double offset = brightness(rng);
    const Coefficients luminance = pink_texture(rng, config.texture_strength);
    std::vector<std::vector<double>> planes(kChannels);
    for (std::size_t c = 0; c < kChannels; ++c) {
      const double channel_gain = tint(rng);
      const Coefficients chroma = pink_texture(rng, 0.3 * config.texture_strength);
      Matrix spectrum(kSide, kSide);
      for (std::size_t i = 0; i < kSide * kSide; ++i) {
        spectrum.data[i] = g * templates[label][c][i] +
                           channel_gain * luminance[i] + chroma[i];
      }
      // DC sets the mean brightness: pixel mean = DC / side.
      spectrum.data[0] = (0.5 + offset) * static_cast<double>(kSide);
      planes[c] = idct2(spectrum).data;
    }
    // Quantise like a real 8-bit dataset.
    dataset.images.push_back(quantize(Image::clamped(shape, interleave(shape, planes))));
    dataset.labels.push_back(label);
  }
  return dataset;
}

}  // namespace recess
