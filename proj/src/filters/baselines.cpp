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
#include <numbers>

#include "recess/error.hpp"
#include "recess/filters.hpp"

namespace recess {
namespace {

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
  return static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
}

void check_median_params(const Image& image, std::size_t k) {
  if (k < 2 || k > std::min(image.height(), image.width())) {
    throw ParameterError("median window " + std::to_string(k) +
                         " outside [2, min(height,width)]");
  }
}

void check_nlm_params(const Image& image, std::size_t search, std::size_t patch,
                      double strength) {
  if (search % 2 == 0 || patch % 2 == 0) {
    throw ParameterError("non-local mean windows must be odd");
  }
  if (patch >= search) {
    throw ParameterError("search window must be larger than the patch");
  }
  if (search > std::min(image.height(), image.width())) {
    throw ParameterError("search window does not fit inside the image");
  }
  if (!(strength > 0.0) || !std::isfinite(strength)) {
    throw ParameterError("non-local mean strength must be positive");
  }
}

template <bool kParallel>
Image run_median(const Image& image, std::size_t k) {
  check_median_params(image, k);
  const Shape& shape = image.shape();
  // Odd windows are centred, even windows start at the output pixel.
  const std::ptrdiff_t lo = k % 2 == 1 ? -static_cast<std::ptrdiff_t>(k / 2) : 0;
  std::vector<double> out(shape.size());
  const auto rows = static_cast<std::ptrdiff_t>(shape.height);
#pragma omp parallel for if (kParallel)
  for (std::ptrdiff_t y = 0; y < rows; ++y) {
    std::vector<double> window(k * k);
    for (std::size_t x = 0; x < shape.width; ++x) {
      for (std::size_t c = 0; c < shape.channels; ++c) {
        std::size_t n = 0;
        for (std::size_t dy = 0; dy < k; ++dy) {
          const std::size_t sy =
              clamp_index(y + lo + static_cast<std::ptrdiff_t>(dy), shape.height);
          for (std::size_t dx = 0; dx < k; ++dx) {
            const std::size_t sx = clamp_index(
                static_cast<std::ptrdiff_t>(x) + lo + static_cast<std::ptrdiff_t>(dx),
                shape.width);
            window[n++] = image.at(sy, sx, c);
          }
        }
        const std::size_t mid = n / 2;
        std::nth_element(window.begin(), window.begin() + mid, window.end());
        double median = window[mid];
        if (n % 2 == 0) {
          const double lower = *std::max_element(window.begin(), window.begin() + mid);
          median = 0.5 * (lower + median);
        }
        out[shape.index(y, x, c)] = median;
      }
    }
  }
  return Image::clamped(shape, std::move(out));
}

template <bool kParallel>
Image run_nlm(const Image& image, std::size_t search, std::size_t patch,
              double strength) {
  check_nlm_params(image, search, patch, strength);
  const Shape& shape = image.shape();
  const auto sr = static_cast<std::ptrdiff_t>(search / 2);
  const auto pr = static_cast<std::ptrdiff_t>(patch / 2);
  const double inv_scale =
      1.0 / (strength * strength * static_cast<double>(patch * patch));
  std::vector<double> out(shape.size());
  const auto rows = static_cast<std::ptrdiff_t>(shape.height);
  const auto cols = static_cast<std::ptrdiff_t>(shape.width);

  auto pixel = [&](std::ptrdiff_t y, std::ptrdiff_t x, std::size_t c) {
    return image.at(clamp_index(y, shape.height), clamp_index(x, shape.width), c);
  };

#pragma omp parallel for if (kParallel)
  for (std::ptrdiff_t y = 0; y < rows; ++y) {
    for (std::ptrdiff_t x = 0; x < cols; ++x) {
      for (std::size_t c = 0; c < shape.channels; ++c) {
        double weighted = 0.0;
        double total = 0.0;
        for (std::ptrdiff_t sy = -sr; sy <= sr; ++sy) {
          for (std::ptrdiff_t sx = -sr; sx <= sr; ++sx) {
            // Candidate position is replicated at the border like the patches.
            const auto cy = static_cast<std::ptrdiff_t>(clamp_index(y + sy, shape.height));
            const auto cx = static_cast<std::ptrdiff_t>(clamp_index(x + sx, shape.width));
            double dist = 0.0;
            for (std::ptrdiff_t py = -pr; py <= pr; ++py) {
              for (std::ptrdiff_t px = -pr; px <= pr; ++px) {
                const double d = pixel(y + py, x + px, c) - pixel(cy + py, cx + px, c);
                dist += d * d;
              }
            }
            const double w = std::exp(-dist * inv_scale);
            weighted += w * pixel(cy, cx, c);
            total += w;
          }
        }
        out[shape.index(y, x, c)] = weighted / total;
      }
    }
  }
  return Image::clamped(shape, std::move(out));
}

}  // namespace

Image bit_depth_reduce(const Image& image, int bits) {
  if (bits < 1 || bits > 7) {
    throw ParameterError("bit depth must lie in [1,7], got " + std::to_string(bits));
  }
  const double levels = static_cast<double>((1 << bits) - 1);
  std::vector<double> out(image.pixels().begin(), image.pixels().end());
  for (double& v : out) v = std::round(v * levels) / levels;
  return Image::clamped(image.shape(), std::move(out));
}

Image median_smooth(const Image& image, std::size_t k) {
  return run_median<true>(image, k);
}

Image non_local_mean(const Image& image, std::size_t search, std::size_t patch,
                     double strength) {
  return run_nlm<true>(image, search, patch, strength);
}

Image rotate(const Image& image, double degrees) {
  if (!std::isfinite(degrees)) throw ParameterError("rotation angle must be finite");
  const Shape& shape = image.shape();
  const double theta = degrees * std::numbers::pi / 180.0;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double cy = (static_cast<double>(shape.height) - 1.0) / 2.0;
  const double cx = (static_cast<double>(shape.width) - 1.0) / 2.0;
  const double max_y = static_cast<double>(shape.height - 1);
  const double max_x = static_cast<double>(shape.width - 1);
  std::vector<double> out(shape.size());
  const auto rows = static_cast<std::ptrdiff_t>(shape.height);

#pragma omp parallel for
  for (std::ptrdiff_t y = 0; y < rows; ++y) {
    for (std::size_t x = 0; x < shape.width; ++x) {
      // Inverse map: rows grow downwards, so a visually counter-clockwise
      // turn of the content samples the source at R(-theta) in y-up axes.
      const double dx = static_cast<double>(x) - cx;
      const double dy = static_cast<double>(y) - cy;
      const double sx = std::clamp(cx + dx * cos_t - dy * sin_t, 0.0, max_x);
      const double sy = std::clamp(cy + dx * sin_t + dy * cos_t, 0.0, max_y);
      const auto x0 = static_cast<std::size_t>(std::floor(sx));
      const auto y0 = static_cast<std::size_t>(std::floor(sy));
      const std::size_t x1 = std::min(x0 + 1, shape.width - 1);
      const std::size_t y1 = std::min(y0 + 1, shape.height - 1);
      const double fx = sx - static_cast<double>(x0);
      const double fy = sy - static_cast<double>(y0);
      for (std::size_t c = 0; c < shape.channels; ++c) {
        const double top = (1.0 - fx) * image.at(y0, x0, c) + fx * image.at(y0, x1, c);
        const double bottom =
            (1.0 - fx) * image.at(y1, x0, c) + fx * image.at(y1, x1, c);
        out[shape.index(y, x, c)] = (1.0 - fy) * top + fy * bottom;
      }
    }
  }
  return Image::clamped(shape, std::move(out));
}

namespace serial {

Image median_smooth(const Image& image, std::size_t k) {
  return run_median<false>(image, k);
}

Image non_local_mean(const Image& image, std::size_t search, std::size_t patch,
                     double strength) {
  return run_nlm<false>(image, search, patch, strength);
}

}  // namespace serial
}  // namespace recess
