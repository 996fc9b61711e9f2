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

#ifndef RECESS_TRANSFORM_HPP_
#define RECESS_TRANSFORM_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "recess/image.hpp"

namespace recess {

// Dense row-major real matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> values);

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
};

// Orthonormal DCT-II basis for one axis of length L:
//   basis(k, n) = a_k * cos(pi * k * (2n + 1) / (2L)),
//   a_0 = 1/sqrt(L), a_k = sqrt(2/L) for k > 0.
// Tables are built once per length and shared; `get` is safe to call from
// any thread.
class CosineTable {
 public:
  explicit CosineTable(std::size_t length);

  static std::shared_ptr<const CosineTable> get(std::size_t length);

  std::size_t length() const { return length_; }
  // Row k of the basis, contiguous over n.
  const double* row(std::size_t k) const { return basis_.data() + k * length_; }
  // Column n of the basis with even k first, then odd k:
  // [basis(0,n), basis(2,n), ..., basis(1,n), basis(3,n), ...].
  const double* split_column(std::size_t n) const { return split_.data() + n * length_; }
  double operator()(std::size_t k, std::size_t n) const {
    return basis_[k * length_ + n];
  }

 private:
  std::size_t length_;
  std::vector<double> basis_;
  std::vector<double> split_;
};

// Forward/inverse orthonormal 2-D DCT of one channel. Separable: a row pass
// then a column pass, O(MN(M+N)). Throws NumericError on non-finite input.
Matrix dct2(const Matrix& channel);
Matrix idct2(const Matrix& spectrum);

// Per-channel DCT coefficients, same layout as the source image.
struct Spectrum {
  Shape shape;
  std::vector<double> coefficients;
};

Spectrum dct_image(const Image& image);
// Inverse per channel. Output is not clipped to [0,1].
Raster idct_image(const Spectrum& spectrum);

// Transforms one height x width plane, keeps only the top-left
// kept_rows x kept_cols block of coefficients, and inverts, writing the
// band-limited plane to `out`. Only the kept coefficients are ever
// computed. Returns the number of multiply-adds performed.
std::uint64_t lowpass_plane(std::span<const double> plane, std::size_t height,
                            std::size_t width, std::size_t kept_rows,
                            std::size_t kept_cols, std::span<double> out);

// Multiply-add count of lowpass_plane for the given geometry.
std::uint64_t lowpass_cost(std::size_t height, std::size_t width,
                           std::size_t kept_rows, std::size_t kept_cols);

// Single-threaded reference kernels. Same arithmetic, same summation order as
// the OpenMP versions above, so results agree bit for bit.
namespace serial {

Matrix dct2(const Matrix& channel);
Matrix idct2(const Matrix& spectrum);
std::uint64_t lowpass_plane(std::span<const double> plane, std::size_t height,
                            std::size_t width, std::size_t kept_rows,
                            std::size_t kept_cols, std::span<double> out);

}  // namespace serial

}  // namespace recess

#endif  // RECESS_TRANSFORM_HPP_
