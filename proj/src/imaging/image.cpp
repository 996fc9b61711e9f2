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

#include "recess/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "recess/error.hpp"

namespace recess {
namespace {

void check_shape(const Shape& shape, std::size_t length) {
  if (shape.height == 0 || shape.width == 0) {
    throw ContractError("image dimensions must be positive, got " +
                        shape.to_string());
  }
  if (shape.channels != 1 && shape.channels != 3) {
    throw ContractError("image must have 1 or 3 channels, got " +
                        std::to_string(shape.channels));
  }
  if (length != shape.size()) {
    throw ContractError("pixel buffer has " + std::to_string(length) +
                        " values, shape " + shape.to_string() + " needs " +
                        std::to_string(shape.size()));
  }
}

}  // namespace

std::string Shape::to_string() const {
  std::ostringstream out;
  out << height << "x" << width << "x" << channels;
  return out.str();
}

Shape parse_shape(const std::string& text) {
  Shape shape;
  shape.channels = 1;
  std::vector<std::size_t> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('x', start), text.size());
    const std::string token = text.substr(start, end - start);
    if (token.empty() ||
        !std::all_of(token.begin(), token.end(), [](unsigned char ch) {
          return std::isdigit(ch);
        })) {
      throw ParameterError("malformed shape '" + text + "', expected HxW[xC]");
    }
    parts.push_back(std::stoul(token));
    start = end + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw ParameterError("malformed shape '" + text + "', expected HxW[xC]");
  }
  shape.height = parts[0];
  shape.width = parts[1];
  if (parts.size() == 3) shape.channels = parts[2];
  if (shape.height == 0 || shape.width == 0 ||
      (shape.channels != 1 && shape.channels != 3)) {
    throw ParameterError("unsupported shape '" + text + "'");
  }
  return shape;
}

Image::Image(Shape shape, std::vector<double> pixels)
    : shape_(shape), pixels_(std::move(pixels)) {
  check_shape(shape_, pixels_.size());
  for (std::size_t i = 0; i < pixels_.size(); ++i) {
    const double v = pixels_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ContractError("pixel " + std::to_string(i) + " = " +
                          std::to_string(v) + " outside [0,1]");
    }
  }
}

Image Image::clamped(Shape shape, std::vector<double> values) {
  for (double& v : values) {
    if (!std::isfinite(v)) throw NumericError("non-finite pixel value");
    v = std::clamp(v, 0.0, 1.0);
  }
  return Image(shape, std::move(values));
}

Image Image::filled(Shape shape, double value) {
  return Image(shape, std::vector<double>(shape.size(), value));
}

std::vector<double> Image::plane(std::size_t c) const {
  const std::size_t n = shape_.height * shape_.width;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = pixels_[i * shape_.channels + c];
  return out;
}

std::vector<double> interleave(const Shape& shape,
                               const std::vector<std::vector<double>>& planes) {
  const std::size_t n = shape.height * shape.width;
  std::vector<double> out(shape.size());
  for (std::size_t c = 0; c < shape.channels; ++c) {
    for (std::size_t i = 0; i < n; ++i) out[i * shape.channels + c] = planes[c][i];
  }
  return out;
}

double max_abs_diff(const Image& a, const Image& b) {
  if (a.shape() != b.shape()) {
    throw ContractError("shape mismatch: " + a.shape().to_string() + " vs " +
                        b.shape().to_string());
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) {
    worst = std::max(worst, std::abs(a.pixels()[i] - b.pixels()[i]));
  }
  return worst;
}

double l2_distance(const Image& a, const Image& b) {
  if (a.shape() != b.shape()) {
    throw ContractError("shape mismatch: " + a.shape().to_string() + " vs " +
                        b.shape().to_string());
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) {
    const double d = a.pixels()[i] - b.pixels()[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

void LabeledDataset::validate() const {
  if (images.size() != labels.size()) {
    throw ContractError("dataset has " + std::to_string(images.size()) +
                        " images but " + std::to_string(labels.size()) +
                        " labels");
  }
  if (num_classes <= 0) throw ContractError("num_classes must be positive");
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].shape() != images.front().shape()) {
      throw ContractError("image " + std::to_string(i) + " has shape " +
                          images[i].shape().to_string() + ", expected " +
                          images.front().shape().to_string());
    }
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw ContractError("label " + std::to_string(labels[i]) + " at record " +
                          std::to_string(i) + " outside [0," +
                          std::to_string(num_classes) + ")");
    }
  }
}

}  // namespace recess
