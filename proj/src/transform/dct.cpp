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
#include <mutex>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "recess/error.hpp"
#include "recess/transform.hpp"

namespace recess {
namespace {

// Below this many elements per plane the OpenMP fork costs more than it saves.
constexpr std::size_t kParallelThreshold = 64 * 64;

void check_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError("non-finite value in DCT input");
  }
}

void check_dims(std::size_t rows, std::size_t cols, std::size_t length) {
  if (rows == 0 || cols == 0) throw ContractError("DCT needs a non-empty matrix");
  if (length != rows * cols) throw ContractError("matrix buffer size mismatch");
}

// Every pass folds with the symmetry basis(k, L-1-n) = (-1)^k basis(k, n):
// even k only see x[n] + x[L-1-n], odd k only x[n] - x[L-1-n], and for odd L
// the middle sample only reaches even k. That halves the multiply-adds.

std::size_t evens(std::size_t n) { return (n + 1) / 2; }  // even indices below n

// tmp[x][v] = sum_y in[x][y] * basis_w(v, y)              (v < kc)
template <bool kParallel>
void forward_rows(const double* in, std::size_t h, std::size_t w,
                  const CosineTable& tw, std::size_t kc, double* tmp) {
  const std::size_t half = w / 2, ke = evens(kc), ko = kc / 2, ne = evens(w);
#pragma omp parallel for if (kParallel && h * w >= kParallelThreshold)
  for (std::size_t x = 0; x < h; ++x) {
    const double* src = in + x * w;
    std::vector<double> even(ke, 0.0), odd(ko, 0.0);
    for (std::size_t y = 0; y < half; ++y) {
      const double e = src[y] + src[w - 1 - y];
      const double o = src[y] - src[w - 1 - y];
      const double* b = tw.split_column(y);
      for (std::size_t j = 0; j < ke; ++j) even[j] += e * b[j];
      for (std::size_t j = 0; j < ko; ++j) odd[j] += o * b[ne + j];
    }
    if (w % 2 == 1) {
      const double m = src[half];
      const double* b = tw.split_column(half);
      for (std::size_t j = 0; j < ke; ++j) even[j] += m * b[j];
    }
    double* dst = tmp + x * kc;
    for (std::size_t j = 0; j < ke; ++j) dst[2 * j] = even[j];
    for (std::size_t j = 0; j < ko; ++j) dst[2 * j + 1] = odd[j];
  }
}

// out[u][v] = sum_x basis_h(u, x) * tmp[x][v]             (u < kr)
template <bool kParallel>
void forward_cols(const double* tmp, std::size_t h, std::size_t kc,
                  const CosineTable& th, std::size_t kr, double* out) {
  const std::size_t half = h / 2;
  std::vector<double> sums(half * kc), diffs(half * kc);
  for (std::size_t x = 0; x < half; ++x) {
    const double* top = tmp + x * kc;
    const double* bottom = tmp + (h - 1 - x) * kc;
    for (std::size_t v = 0; v < kc; ++v) {
      sums[x * kc + v] = top[v] + bottom[v];
      diffs[x * kc + v] = top[v] - bottom[v];
    }
  }
#pragma omp parallel for if (kParallel && h * kc >= kParallelThreshold)
  for (std::size_t u = 0; u < kr; ++u) {
    double* dst = out + u * kc;
    for (std::size_t v = 0; v < kc; ++v) dst[v] = 0.0;
    const double* b = th.row(u);
    const double* folded = u % 2 == 0 ? sums.data() : diffs.data();
    for (std::size_t x = 0; x < half; ++x) {
      const double a = b[x];
      const double* src = folded + x * kc;
      for (std::size_t v = 0; v < kc; ++v) dst[v] += a * src[v];
    }
    if (h % 2 == 1 && u % 2 == 0) {
      const double a = b[half];
      const double* src = tmp + half * kc;
      for (std::size_t v = 0; v < kc; ++v) dst[v] += a * src[v];
    }
  }
}

// tmp[u][y] = sum_v coef[u][v] * basis_w(v, y)
template <bool kParallel>
void inverse_rows(const double* coef, std::size_t kr, std::size_t kc,
                  const CosineTable& tw, std::size_t w, double* tmp) {
  const std::size_t half = w / 2, ne = evens(w);
#pragma omp parallel for if (kParallel && kr * w >= kParallelThreshold)
  for (std::size_t u = 0; u < kr; ++u) {
    std::vector<double> even(ne, 0.0), odd(half, 0.0);
    for (std::size_t v = 0; v < kc; ++v) {
      const double s = coef[u * kc + v];
      const double* b = tw.row(v);
      if (v % 2 == 0) {
        for (std::size_t y = 0; y < ne; ++y) even[y] += s * b[y];
      } else {
        for (std::size_t y = 0; y < half; ++y) odd[y] += s * b[y];
      }
    }
    double* dst = tmp + u * w;
    for (std::size_t y = 0; y < half; ++y) {
      dst[y] = even[y] + odd[y];
      dst[w - 1 - y] = even[y] - odd[y];
    }
    if (w % 2 == 1) dst[half] = even[half];
  }
}

// out[x][y] = sum_u basis_h(u, x) * tmp[u][y]
template <bool kParallel>
void inverse_cols(const double* tmp, std::size_t kr, const CosineTable& th,
                  std::size_t h, std::size_t w, double* out) {
  const std::size_t half = h / 2;
#pragma omp parallel for if (kParallel && h * w >= kParallelThreshold)
  for (std::size_t x = 0; x < evens(h); ++x) {
    std::vector<double> even(w, 0.0), odd(w, 0.0);
    for (std::size_t u = 0; u < kr; u += 2) {
      const double a = th(u, x);
      const double* src = tmp + u * w;
      for (std::size_t y = 0; y < w; ++y) even[y] += a * src[y];
    }
    if (x == half) {  // middle row of an odd height
      std::copy(even.begin(), even.end(), out + x * w);
      continue;
    }
    for (std::size_t u = 1; u < kr; u += 2) {
      const double a = th(u, x);
      const double* src = tmp + u * w;
      for (std::size_t y = 0; y < w; ++y) odd[y] += a * src[y];
    }
    double* top = out + x * w;
    double* bottom = out + (h - 1 - x) * w;
    for (std::size_t y = 0; y < w; ++y) {
      top[y] = even[y] + odd[y];
      bottom[y] = even[y] - odd[y];
    }
  }
}

template <bool kParallel>
Matrix forward(const Matrix& channel) {
  check_dims(channel.rows, channel.cols, channel.data.size());
  check_finite(channel.data);
  const auto th = CosineTable::get(channel.rows);
  const auto tw = CosineTable::get(channel.cols);
  std::vector<double> tmp(channel.rows * channel.cols);
  Matrix out(channel.rows, channel.cols);
  forward_rows<kParallel>(channel.data.data(), channel.rows, channel.cols, *tw,
                          channel.cols, tmp.data());
  forward_cols<kParallel>(tmp.data(), channel.rows, channel.cols, *th,
                          channel.rows, out.data.data());
  return out;
}

template <bool kParallel>
Matrix inverse(const Matrix& spectrum) {
  check_dims(spectrum.rows, spectrum.cols, spectrum.data.size());
  check_finite(spectrum.data);
  const auto th = CosineTable::get(spectrum.rows);
  const auto tw = CosineTable::get(spectrum.cols);
  std::vector<double> tmp(spectrum.rows * spectrum.cols);
  Matrix out(spectrum.rows, spectrum.cols);
  inverse_rows<kParallel>(spectrum.data.data(), spectrum.rows, spectrum.cols,
                          *tw, spectrum.cols, tmp.data());
  inverse_cols<kParallel>(tmp.data(), spectrum.rows, *th, spectrum.rows,
                          spectrum.cols, out.data.data());
  return out;
}

template <bool kParallel>
std::uint64_t lowpass(std::span<const double> plane, std::size_t h,
                      std::size_t w, std::size_t kr, std::size_t kc,
                      std::span<double> out) {
  check_dims(h, w, plane.size());
  if (out.size() != plane.size()) throw ContractError("output plane size mismatch");
  if (kr == 0 || kc == 0 || kr > h || kc > w) {
    throw ContractError("kept block must lie inside the spectrum");
  }
  check_finite(plane);
  const auto th = CosineTable::get(h);
  const auto tw = CosineTable::get(w);
  std::vector<double> rows(h * kc);
  std::vector<double> coef(kr * kc);
  std::vector<double> back(kr * w);
  forward_rows<kParallel>(plane.data(), h, w, *tw, kc, rows.data());
  forward_cols<kParallel>(rows.data(), h, kc, *th, kr, coef.data());
  inverse_rows<kParallel>(coef.data(), kr, kc, *tw, w, back.data());
  inverse_cols<kParallel>(back.data(), kr, *th, h, w, out.data());
  return lowpass_cost(h, w, kr, kc);
}

}  // namespace

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
  check_dims(rows, cols, data.size());
}

CosineTable::CosineTable(std::size_t length) : length_(length) {
  if (length == 0) throw ContractError("cosine table length must be positive");
  basis_.resize(length * length);
  split_.resize(length * length);
  const std::size_t evens = (length + 1) / 2;
  const double l = static_cast<double>(length);
  for (std::size_t k = 0; k < length; ++k) {
    const double scale = k == 0 ? 1.0 / std::sqrt(l) : std::sqrt(2.0 / l);
    for (std::size_t n = 0; n < length; ++n) {
      basis_[k * length + n] =
          scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                           static_cast<double>(2 * n + 1) / (2.0 * l));
      split_[n * length + (k % 2 == 0 ? k / 2 : evens + k / 2)] = basis_[k * length + n];
    }
  }
}

std::shared_ptr<const CosineTable> CosineTable::get(std::size_t length) {
  static std::mutex mutex;
  static std::unordered_map<std::size_t, std::shared_ptr<const CosineTable>>
      cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[length];
  if (!slot) slot = std::make_shared<const CosineTable>(length);
  return slot;
}

Matrix dct2(const Matrix& channel) { return forward<true>(channel); }
Matrix idct2(const Matrix& spectrum) { return inverse<true>(spectrum); }

std::uint64_t lowpass_plane(std::span<const double> plane, std::size_t height,
                            std::size_t width, std::size_t kept_rows,
                            std::size_t kept_cols, std::span<double> out) {
  return lowpass<true>(plane, height, width, kept_rows, kept_cols, out);
}

std::uint64_t lowpass_cost(std::size_t height, std::size_t width,
                           std::size_t kept_rows, std::size_t kept_cols) {
  // Mirrors the folded passes above.
  const std::uint64_t h = height, w = width, kr = kept_rows, kc = kept_cols;
  const std::uint64_t hh = h / 2, hm = h % 2, wh = w / 2, wm = w % 2;
  const std::uint64_t kre = (kr + 1) / 2, kce = (kc + 1) / 2;
  return h * (wh * kc + wm * kce) + kc * (kr * hh + kre * hm) +
         kr * (kc * wh + kce * wm) + w * (hh * kr + hm * kre);
}

Spectrum dct_image(const Image& image) {
  const Shape& shape = image.shape();
  std::vector<std::vector<double>> planes(shape.channels);
#pragma omp parallel for if (shape.channels > 1)
  for (std::size_t c = 0; c < shape.channels; ++c) {
    planes[c] = dct2(Matrix(shape.height, shape.width, image.plane(c))).data;
  }
  return Spectrum{shape, interleave(shape, planes)};
}

Raster idct_image(const Spectrum& spectrum) {
  const Shape& shape = spectrum.shape;
  if (spectrum.coefficients.size() != shape.size()) {
    throw ContractError("spectrum buffer size mismatch");
  }
  check_finite(spectrum.coefficients);  // no throwing inside the parallel loop
  const std::size_t n = shape.height * shape.width;
  std::vector<std::vector<double>> planes(shape.channels);
#pragma omp parallel for if (shape.channels > 1)
  for (std::size_t c = 0; c < shape.channels; ++c) {
    std::vector<double> plane(n);
    for (std::size_t i = 0; i < n; ++i) {
      plane[i] = spectrum.coefficients[i * shape.channels + c];
    }
    planes[c] = idct2(Matrix(shape.height, shape.width, std::move(plane))).data;
  }
  return Raster{shape, interleave(shape, planes)};
}

namespace serial {

Matrix dct2(const Matrix& channel) { return forward<false>(channel); }
Matrix idct2(const Matrix& spectrum) { return inverse<false>(spectrum); }

std::uint64_t lowpass_plane(std::span<const double> plane, std::size_t height,
                            std::size_t width, std::size_t kept_rows,
                            std::size_t kept_cols, std::span<double> out) {
  return lowpass<false>(plane, height, width, kept_rows, kept_cols, out);
}

}  // namespace serial
}  // namespace recess
