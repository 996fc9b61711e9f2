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
#include <cmath>

#include "recess/error.hpp"
#include "recess/filters.hpp"
#include "recess/transform.hpp"

namespace recess {
namespace {

template <bool kParallel>
Image run_feature_filter(const Image& image, const FilterSpec& spec) {
  const Shape& shape = image.shape();
  const std::size_t kr = spec.kept_rows(shape.height);
  const std::size_t kc = spec.kept_cols(shape.width);
  std::vector<std::vector<double>> planes(shape.channels);
#pragma omp parallel for if (kParallel && shape.channels > 1)
  for (std::size_t c = 0; c < shape.channels; ++c) {
    const std::vector<double> plane = image.plane(c);
    planes[c].resize(plane.size());
    if constexpr (kParallel) {
      lowpass_plane(plane, shape.height, shape.width, kr, kc, planes[c]);
    } else {
      serial::lowpass_plane(plane, shape.height, shape.width, kr, kc, planes[c]);
    }
  }
  return Image::clamped(shape, interleave(shape, planes));
}

}  // namespace

FilterSpec::FilterSpec(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ParameterError("feature reservation ratio must lie in (0,1], got " +
                         std::to_string(alpha));
  }
}

std::size_t FilterSpec::kept(std::size_t length) const {
  // The epsilon keeps decimal ratios such as 0.29 * 100 from flooring to 28.
  const double scaled = std::floor(alpha_ * static_cast<double>(length) + 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(scaled), 1, length);
}

Image feature_filter(const Image& image, const FilterSpec& spec) {
  return run_feature_filter<true>(image, spec);
}

std::uint64_t feature_filter_cost(const Shape& shape, const FilterSpec& spec) {
  return shape.channels * lowpass_cost(shape.height, shape.width,
                                       spec.kept_rows(shape.height),
                                       spec.kept_cols(shape.width));
}

namespace serial {

Image feature_filter(const Image& image, const FilterSpec& spec) {
  return run_feature_filter<false>(image, spec);
}

}  // namespace serial
}  // namespace recess
