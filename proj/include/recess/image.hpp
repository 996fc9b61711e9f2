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

#ifndef RECESS_IMAGE_HPP_
#define RECESS_IMAGE_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace recess {

// Height x width x channels. Storage is always row-major with channels
// interleaved: index = (y * width + x) * channels + c.
struct Shape {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;

  std::size_t size() const { return height * width * channels; }
  std::size_t index(std::size_t y, std::size_t x, std::size_t c) const {
    return (y * width + x) * channels + c;
  }
  std::string to_string() const;  // "HxWxC"

  friend bool operator==(const Shape&, const Shape&) = default;
};

// Parses "32x32x3" (channels optional, defaults to 1). Throws ParameterError.
Shape parse_shape(const std::string& text);

// Unbounded real raster with the image layout. Used for spectra and for
// un-clipped intermediate results.
struct Raster {
  Shape shape;
  std::vector<double> values;
};

// Immutable image with pixels in [0,1].
//
// Every constructor validates: positive dimensions, channels in {1,3},
// matching buffer length, finite values inside [0,1].
class Image {
 public:
  Image(Shape shape, std::vector<double> pixels);

  // Clamps every value into [0,1]. Non-finite values are still rejected.
  static Image clamped(Shape shape, std::vector<double> values);
  static Image filled(Shape shape, double value);

  const Shape& shape() const { return shape_; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::size_t channels() const { return shape_.channels; }
  std::span<const double> pixels() const { return pixels_; }
  double at(std::size_t y, std::size_t x, std::size_t c) const {
    return pixels_[shape_.index(y, x, c)];
  }

  // Copy of channel c as a height x width row-major plane.
  std::vector<double> plane(std::size_t c) const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  Shape shape_;
  std::vector<double> pixels_;
};

// Interleaves per-channel planes back into image layout.
std::vector<double> interleave(const Shape& shape,
                               const std::vector<std::vector<double>>& planes);

// Max absolute per-pixel difference. Shapes must agree.
double max_abs_diff(const Image& a, const Image& b);
// L2 norm of (a - b) over all pixels.
double l2_distance(const Image& a, const Image& b);

struct LabeledDataset {
  std::vector<Image> images;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return images.size(); }
  // Throws ContractError when lengths, shapes or labels are inconsistent.
  void validate() const;
};

}  // namespace recess

#endif  // RECESS_IMAGE_HPP_
