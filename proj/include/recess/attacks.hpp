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

#ifndef RECESS_ATTACKS_HPP_
#define RECESS_ATTACKS_HPP_

#include <cstddef>
#include <cstdint>

#include "recess/image.hpp"
#include "recess/model.hpp"

namespace recess {

struct AttackResult {
  Image adversarial;
  bool success = false;
  int original_label = 0;     // model prediction on the clean image
  int adversarial_label = 0;  // model prediction on `adversarial`
  double perturbation_l2 = 0.0;
  std::size_t iterations_used = 0;
};

// One signed-gradient step on the cross-entropy against `true_label`:
// clamp(x + epsilon * sign(grad), 0, 1) with sign(0) = 0. Success means the
// predicted label moved away from the clean prediction.
AttackResult fgsm(const BuiltinModel& model, const Image& image, int true_label,
                  double epsilon);

struct CwConfig {
  double c = 1.0;
  double confidence = 0.0;  // k
  std::size_t steps = 1000;
  double step_size = 0.01;
};

// Targeted L2 attack: gradient descent on |delta|^2 + c * margin_loss(x +
// delta), iterates clamped into [0,1]. The step halves whenever the
// objective would increase; after 10 halvings the search stops. Returns the
// successful iterate with the smallest |delta|, or the last accepted iterate
// with success = false. Throws DivergenceError with the step index on a
// non-finite objective.
AttackResult cw_l2(const BuiltinModel& model, const Image& image, int target,
                   const CwConfig& config);

// Second most likely class of the clean prediction. Used as the target when
// an untargeted flip is wanted.
int runner_up_target(const BuiltinModel& model, const Image& image);

// Natural noise, deterministic for a given seed. Outputs are clamped.
Image gaussian_noise(const Image& image, double sigma, std::uint64_t seed);
// pixel' = Poisson(pixel * scale) / scale.
Image poisson_noise(const Image& image, double scale, std::uint64_t seed);
// Each pixel value independently replaced with 0 or 1 (equal odds) with
// probability p.
Image salt_pepper(const Image& image, double p, std::uint64_t seed);

}  // namespace recess

#endif  // RECESS_ATTACKS_HPP_
