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

#ifndef RECESS_MODEL_HPP_
#define RECESS_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "recess/image.hpp"

namespace recess {

// flatten -> dense(hidden, ReLU) -> dense(classes). Weights are row-major:
// hidden_weights is hidden x input_size, output_weights is classes x hidden.
struct BuiltinModel {
  Shape input_shape;
  std::size_t hidden = 0;
  std::size_t classes = 0;
  std::vector<double> hidden_weights;
  std::vector<double> hidden_bias;
  std::vector<double> output_weights;
  std::vector<double> output_bias;

  std::size_t input_size() const { return input_shape.size(); }
  // All-zero parameters of the right dimensions.
  static BuiltinModel zeros(Shape input_shape, std::size_t hidden,
                            std::size_t classes);
  // Throws ContractError when tensor sizes disagree with the declared dims.
  void validate() const;

  friend bool operator==(const BuiltinModel&, const BuiltinModel&) = default;
};

// Intermediate values of one forward pass, kept for backpropagation.
struct ForwardPass {
  std::vector<double> pre_activation;  // hidden
  std::vector<double> activation;      // hidden
  std::vector<double> logits;          // classes
};

ForwardPass forward(const BuiltinModel& model, std::span<const double> input);

// Pre-softmax output Z(x). Throws ContractError on shape mismatch.
std::vector<double> logits(const BuiltinModel& model, const Image& image);

std::vector<double> softmax(std::span<const double> z);
// Index of the largest value; ties go to the lowest index.
int argmax(std::span<const double> values);

// Softmax cross-entropy against `label`.
struct CrossEntropyLoss {
  int label = 0;
};
// max(max_{i != target} Z_i - Z_target, -confidence).
struct CarliniWagnerLoss {
  int target = 0;
  double confidence = 0.0;
};
using LossSpec = std::variant<CrossEntropyLoss, CarliniWagnerLoss>;

double carlini_wagner_loss(std::span<const double> z, int target,
                           double confidence);

double loss_value(const BuiltinModel& model, const Image& image,
                  const LossSpec& loss);
// Exact gradient of the loss with respect to the input pixels, in image
// layout. For the margin loss the flat branch (value == -confidence) has
// zero gradient.
std::vector<double> input_gradient(const BuiltinModel& model,
                                   const Image& image, const LossSpec& loss);

struct TrainConfig {
  std::size_t hidden_size = 256;
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  double learning_rate = 0.01;
  std::uint64_t seed = 42;
};

struct EpochStats {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double train_accuracy = 0.0;
};

// Mini-batch SGD on softmax cross-entropy. Initialisation is uniform in
// +-1/sqrt(fan_in) and the shuffle order comes from the same seed, so the
// result is bit-identical for a given (dataset, config) regardless of thread
// count. Throws DivergenceError naming the epoch on a non-finite loss.
BuiltinModel train_builtin(
    const LabeledDataset& dataset, const TrainConfig& config,
    const std::function<void(const EpochStats&)>& on_epoch = {});

double accuracy(const BuiltinModel& model, const LabeledDataset& dataset);

// File layout: "RFF1", little-endian u32 height, width, channels, hidden,
// classes, then hidden_weights, hidden_bias, output_weights, output_bias as
// little-endian IEEE-754 doubles.
void save_model(const BuiltinModel& model, const std::filesystem::path& path);
BuiltinModel load_model(const std::filesystem::path& path);

}  // namespace recess

#endif  // RECESS_MODEL_HPP_
