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

#ifndef RECESS_FILTERS_HPP_
#define RECESS_FILTERS_HPP_

#include <cstddef>
#include <cstdint>

#include "recess/image.hpp"

namespace recess {

// Feature reservation ratio. The filter keeps the top-left
// kept_rows(M) x kept_cols(N) block of DCT coefficients in every channel.
class FilterSpec {
 public:
  // Throws ParameterError unless 0 < alpha <= 1.
  explicit FilterSpec(double alpha);

  double alpha() const { return alpha_; }
  // max(1, floor(alpha * length)). The DC coefficient is always kept.
  std::size_t kept_rows(std::size_t height) const { return kept(height); }
  std::size_t kept_cols(std::size_t width) const { return kept(width); }

 private:
  std::size_t kept(std::size_t length) const;
  double alpha_;
};

// DCT each channel, zero every coefficient outside the kept block, inverse
// DCT, clamp to [0,1].
Image feature_filter(const Image& image, const FilterSpec& spec);
// Multiply-adds performed by one feature_filter call.
std::uint64_t feature_filter_cost(const Shape& shape, const FilterSpec& spec);

// Baseline input transforms.

// Quantises to 2^bits levels: round(p * (2^bits - 1)) / (2^bits - 1).
// bits must be in [1,7].
Image bit_depth_reduce(const Image& image, int bits);

// k x k median per channel with edge replication. Odd k is centred; even k
// covers offsets [0,k) from the output pixel. Even windows average the two
// middle order statistics. 2 <= k <= min(height, width).
Image median_smooth(const Image& image, std::size_t k);

// Non-local means per channel. Each pixel becomes the normalised
// exp(-|P_i - P_j|^2 / (h^2 * patch^2))-weighted mean over its search
// window. Patches and search positions are edge-replicated. search and
// patch are odd with patch < search <= min(height, width); h > 0.
Image non_local_mean(const Image& image, std::size_t search, std::size_t patch,
                     double strength);

// Counter-clockwise rotation about the image centre, bilinear sampling with
// edge replication. Output shape equals input shape.
Image rotate(const Image& image, double degrees);

namespace serial {

Image feature_filter(const Image& image, const FilterSpec& spec);
Image median_smooth(const Image& image, std::size_t k);
Image non_local_mean(const Image& image, std::size_t search, std::size_t patch,
                     double strength);

}  // namespace serial

}  // namespace recess

#endif  // RECESS_FILTERS_HPP_
