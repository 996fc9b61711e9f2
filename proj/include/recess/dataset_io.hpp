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

#ifndef RECESS_DATASET_IO_HPP_
#define RECESS_DATASET_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "recess/image.hpp"

namespace recess {

// 8-bit quantisation used at every I/O boundary:
// clamp(round(pixel * 255), 0, 255), round half away from zero.
std::uint8_t quantize_byte(double pixel);
// Image with each pixel snapped to the nearest byte level.
Image quantize(const Image& image);

// Reads an 8-bit grayscale or RGB PNG. Palette, alpha and non-8-bit images
// are rejected with a FormatError naming the feature.
Image load_png(const std::filesystem::path& path);
void save_png(const Image& image, const std::filesystem::path& path);

// CIFAR-10 binary batch: 3073-byte records, one label byte then the 32x32
// R, G and B planes. Records from all files are concatenated in order and
// truncated to `limit` if given.
inline constexpr std::size_t kCifarRecordBytes = 3073;
inline constexpr int kCifarClasses = 10;

LabeledDataset load_cifar10(const std::vector<std::filesystem::path>& paths,
                            std::optional<std::size_t> limit = std::nullopt);
// Keeps only records whose label is in `classes` and relabels them to their
// position in that list (so classes {3,5} become labels 0 and 1). `limit`
// counts kept records. Records are never materialised for other classes.
LabeledDataset load_cifar10_classes(
    const std::vector<std::filesystem::path>& paths, std::span<const int> classes,
    std::optional<std::size_t> limit = std::nullopt);
// Writes a 32x32x3 dataset in the same layout (pixels quantised to bytes).
void save_cifar10(const LabeledDataset& dataset,
                  const std::filesystem::path& path);

}  // namespace recess

#endif  // RECESS_DATASET_IO_HPP_
