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

#ifndef RECESS_DETECTOR_HPP_
#define RECESS_DETECTOR_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "recess/filters.hpp"
#include "recess/image.hpp"
#include "recess/predictor.hpp"

namespace recess {

enum class Decision { kBenign, kAdversarial };

const char* to_string(Decision decision);

// decision == kAdversarial exactly when the two labels differ.
struct Verdict {
  Decision decision = Decision::kBenign;
  int original_label = 0;
  int filtered_label = 0;
  std::optional<double> alpha;  // unset for baseline transforms
};

using Transform = std::function<Image(const Image&)>;

// Feature-filter detection: filter, predict both images, compare labels.
// Exactly two predictor calls; scores are never read. Transport errors
// propagate.
Verdict detect(const Image& image, Predictor& predictor, const FilterSpec& spec);

// Same pipeline with an arbitrary input transform in place of the filter.
Verdict detect_with(const Image& image, Predictor& predictor,
                    const Transform& transform);

// Order-preserving map of detect. Runs in parallel when the predictor allows
// concurrent calls, otherwise serially. The first failure (lowest index) is
// rethrown with the image index prepended.
std::vector<Verdict> batch_detect(std::span<const Image> images,
                                  Predictor& predictor, const FilterSpec& spec);
std::vector<Verdict> batch_detect_with(std::span<const Image> images,
                                       Predictor& predictor,
                                       const Transform& transform);

}  // namespace recess

#endif  // RECESS_DETECTOR_HPP_
