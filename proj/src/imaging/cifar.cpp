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
#include <fstream>
#include <iterator>

#include "recess/dataset_io.hpp"
#include "recess/error.hpp"

namespace recess {
namespace {

constexpr std::size_t kSide = 32;
constexpr std::size_t kPlane = kSide * kSide;

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return bytes;
}

LabeledDataset load_records(const std::vector<std::filesystem::path>& paths,
                            std::span<const int> classes, bool filter,
                            std::optional<std::size_t> limit) {
  LabeledDataset dataset;
  dataset.num_classes = filter ? static_cast<int>(classes.size()) : kCifarClasses;
  const Shape shape{kSide, kSide, 3};

  for (const auto& path : paths) {
    if (limit && dataset.size() >= *limit) break;
    const std::vector<unsigned char> bytes = read_all(path);
    if (bytes.size() % kCifarRecordBytes != 0) {
      throw FormatError("'" + path.string() + "' has " +
                        std::to_string(bytes.size()) +
                        " bytes, not a multiple of the 3073-byte record size");
    }
    const std::size_t records = bytes.size() / kCifarRecordBytes;
    for (std::size_t r = 0; r < records; ++r) {
      if (limit && dataset.size() >= *limit) break;
      const unsigned char* record = bytes.data() + r * kCifarRecordBytes;
      if (record[0] >= kCifarClasses) {
        throw FormatError("'" + path.string() + "' record " + std::to_string(r) +
                          " has label byte " + std::to_string(record[0]));
      }
      int label = record[0];
      if (filter) {
        const auto it = std::find(classes.begin(), classes.end(), label);
        if (it == classes.end()) continue;
        label = static_cast<int>(it - classes.begin());
      }
      // Planar RRR..GGG..BBB -> interleaved RGBRGB...
      std::vector<double> pixels(shape.size());
      for (std::size_t c = 0; c < 3; ++c) {
        const unsigned char* plane = record + 1 + c * kPlane;
        for (std::size_t i = 0; i < kPlane; ++i) pixels[i * 3 + c] = plane[i] / 255.0;
      }
      dataset.images.emplace_back(shape, std::move(pixels));
      dataset.labels.push_back(label);
    }
  }
  return dataset;
}

}  // namespace

LabeledDataset load_cifar10(const std::vector<std::filesystem::path>& paths,
                            std::optional<std::size_t> limit) {
  return load_records(paths, {}, false, limit);
}

LabeledDataset load_cifar10_classes(const std::vector<std::filesystem::path>& paths,
                                    std::span<const int> classes,
                                    std::optional<std::size_t> limit) {
  if (classes.empty()) throw ParameterError("class list must not be empty");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] < 0 || classes[i] >= kCifarClasses) {
      throw ParameterError("CIFAR-10 class " + std::to_string(classes[i]) +
                           " outside [0,10)");
    }
    if (std::find(classes.begin(), classes.begin() + i, classes[i]) !=
        classes.begin() + i) {
      throw ParameterError("duplicate class " + std::to_string(classes[i]));
    }
  }
  return load_records(paths, classes, true, limit);
}

void save_cifar10(const LabeledDataset& dataset,
                  const std::filesystem::path& path) {
  dataset.validate();
  std::vector<unsigned char> bytes;
  bytes.reserve(dataset.size() * kCifarRecordBytes);
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const Image& image = dataset.images[r];
    if (image.shape() != Shape{kSide, kSide, 3}) {
      throw ContractError("CIFAR records must be 32x32x3, got " +
                          image.shape().to_string());
    }
    if (dataset.labels[r] >= kCifarClasses) {
      throw ContractError("label " + std::to_string(dataset.labels[r]) +
                          " does not fit the CIFAR-10 label byte");
    }
    bytes.push_back(static_cast<unsigned char>(dataset.labels[r]));
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < kPlane; ++i) {
        bytes.push_back(quantize_byte(image.pixels()[i * 3 + c]));
      }
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

}  // namespace recess
