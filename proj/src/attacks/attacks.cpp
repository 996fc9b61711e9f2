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
#include <optional>

#include "recess/attacks.hpp"
#include "recess/error.hpp"

namespace recess {
namespace {

constexpr int kMaxHalvings = 10;

double squared_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void check_label(const BuiltinModel& model, int label, const char* what) {
  if (label < 0 || static_cast<std::size_t>(label) >= model.classes) {
    throw ContractError(std::string(what) + " " + std::to_string(label) +
                        " outside [0," + std::to_string(model.classes) + ")");
  }
}

}  // namespace

AttackResult fgsm(const BuiltinModel& model, const Image& image, int true_label,
                  double epsilon) {
  check_label(model, true_label, "label");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError("FGSM epsilon must be a non-negative finite number");
  }
  const std::vector<double> grad =
      input_gradient(model, image, CrossEntropyLoss{true_label});
  std::vector<double> adv(image.pixels().begin(), image.pixels().end());
  for (std::size_t i = 0; i < adv.size(); ++i) {
    const double sign = grad[i] > 0.0 ? 1.0 : (grad[i] < 0.0 ? -1.0 : 0.0);
    adv[i] += epsilon * sign;
  }
  Image adversarial = Image::clamped(image.shape(), std::move(adv));
  const int original = argmax(logits(model, image));
  const int adversarial_label = argmax(logits(model, adversarial));
  const double l2 = l2_distance(adversarial, image);
  return AttackResult{std::move(adversarial), adversarial_label != original, original,
                      adversarial_label, l2, 1};
}

int runner_up_target(const BuiltinModel& model, const Image& image) {
  if (model.classes < 2) throw ContractError("runner-up needs at least two classes");
  const std::vector<double> z = logits(model, image);
  const int top = argmax(z);
  int second = -1;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (static_cast<int>(i) == top) continue;
    if (second < 0 || z[i] > z[second]) second = static_cast<int>(i);
  }
  return second;
}

AttackResult cw_l2(const BuiltinModel& model, const Image& image, int target,
                   const CwConfig& config) {
  check_label(model, target, "target");
  if (!(config.c > 0.0) || !(config.confidence >= 0.0) || !(config.step_size > 0.0)) {
    throw ParameterError("C&W needs c > 0, k >= 0 and step_size > 0");
  }
  const Shape& shape = image.shape();
  const std::span<const double> clean = image.pixels();
  const CarliniWagnerLoss loss{target, config.confidence};

  auto objective = [&](const std::vector<double>& delta, const std::vector<double>& z) {
    return squared_norm(delta) +
           config.c * carlini_wagner_loss(z, target, config.confidence);
  };

  std::vector<double> delta(clean.size(), 0.0);
  Image current = image;
  std::vector<double> z = logits(model, current);
  double value = objective(delta, z);
  const int original = argmax(z);

  std::optional<Image> best;
  double best_norm = 0.0;
  if (argmax(z) == target) {
    best = current;
    best_norm = 0.0;
  }

  double step = config.step_size;
  int halvings = 0;
  std::size_t used = 0;
  std::vector<double> candidate(clean.size());
  std::vector<double> candidate_delta(clean.size());

  for (std::size_t iter = 0; iter < config.steps; ++iter) {
    used = iter + 1;
    const std::vector<double> loss_grad = input_gradient(model, current, loss);
    double grad_max = 0.0;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      const double g = 2.0 * delta[i] + config.c * loss_grad[i];
      grad_max = std::max(grad_max, std::abs(g));
      candidate[i] = std::clamp(clean[i] + delta[i] - step * g, 0.0, 1.0);
      candidate_delta[i] = candidate[i] - clean[i];
    }
    if (grad_max == 0.0) break;  // stationary: nothing left to descend

    for (double v : candidate) {
      if (!std::isfinite(v)) {
        throw DivergenceError("C&W iterate became non-finite at step " +
                              std::to_string(iter));
      }
    }
    Image next(shape, candidate);
    const std::vector<double> next_z = logits(model, next);
    const double next_value = objective(candidate_delta, next_z);
    if (!std::isfinite(next_value)) {
      throw DivergenceError("C&W objective became non-finite at step " +
                            std::to_string(iter));
    }
    if (next_value > value) {
      step *= 0.5;
      if (++halvings > kMaxHalvings) break;
      continue;
    }

    delta.swap(candidate_delta);
    current = std::move(next);
    value = next_value;
    if (argmax(next_z) == target) {
      const double norm = std::sqrt(squared_norm(delta));
      if (!best || norm < best_norm) {
        best = current;
        best_norm = norm;
      }
    }
  }

  Image adversarial = best ? *best : current;
  const int adversarial_label = argmax(logits(model, adversarial));
  const double l2 = l2_distance(adversarial, image);
  return AttackResult{std::move(adversarial), adversarial_label == target, original,
                      adversarial_label, l2, used};
}

}  // namespace recess
