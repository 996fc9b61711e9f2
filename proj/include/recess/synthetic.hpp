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

#ifndef RECESS_SYNTHETIC_HPP_
#define RECESS_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>

#include "recess/image.hpp"

namespace recess {

// Seeded stand-in for CIFAR-10 when the real batches are not available.
//
// Every image is 32x32x3 and built in the DCT domain: a per-class template,
// scaled by a random gain, plus a 1/f "natural image" texture (luminance
// shared across channels with a weaker independent chroma part), plus a
// brightness offset. Templates and texture both follow the 1/f amplitude law
// of photographs, which gives their energy compaction and puts class evidence
// at every frequency, not only the lowest ones.
struct SynthConfig {
  std::size_t count = 1000;
  int num_classes = 10;
  std::uint64_t seed = 42;
  // Class templates depend only on this seed, so train and test splits drawn
  // with different `seed`s share the same classes.
  std::uint64_t template_seed = 2024;
  double template_strength = 0.22;  // std of each template coefficient
  double texture_strength = 1.7;    // amplitude of the 1/f texture at f = 1
};

LabeledDataset synthesize_dataset(const SynthConfig& config);

}  // namespace recess

#endif  // RECESS_SYNTHETIC_HPP_
