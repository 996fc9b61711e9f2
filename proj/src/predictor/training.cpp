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
#include <numeric>
#include <random>

#include "recess/error.hpp"
#include "recess/model.hpp"

namespace recess {

BuiltinModel train_builtin(const LabeledDataset& dataset,
                           const TrainConfig& config,
                           const std::function<void(const EpochStats&)>& on_epoch) {
  if (dataset.size() == 0) throw ContractError("cannot train on an empty dataset");
  dataset.validate();
  if (config.hidden_size == 0 || config.batch_size == 0) {
    throw ParameterError("hidden_size and batch_size must be positive");
  }
  if (!(config.learning_rate > 0.0)) {
    throw ParameterError("learning_rate must be positive");
  }

  BuiltinModel model = BuiltinModel::zeros(dataset.images.front().shape(),
                                           config.hidden_size,
                                           static_cast<std::size_t>(dataset.num_classes));
  const std::size_t d = model.input_size();
  const std::size_t h = model.hidden;
  const std::size_t k = model.classes;

  std::mt19937_64 rng(config.seed);
  {
    const double bound = 1.0 / std::sqrt(static_cast<double>(d));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : model.hidden_weights) w = dist(rng);
  }
  {
    const double bound = 1.0 / std::sqrt(static_cast<double>(h));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : model.output_weights) w = dist(rng);
  }

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t max_batch = config.batch_size;
  std::vector<double> pre(max_batch * h);
  std::vector<double> act(max_batch * h);
  std::vector<double> dz(max_batch * k);
  std::vector<double> dh(max_batch * h);
  std::vector<const double*> inputs(max_batch);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;

    for (std::size_t start = 0; start < order.size(); start += max_batch) {
      const std::size_t batch = std::min(max_batch, order.size() - start);
      for (std::size_t b = 0; b < batch; ++b) {
        inputs[b] = dataset.images[order[start + b]].pixels().data();
      }

      // Hidden layer, one weight row at a time so it stays in cache across
      // the whole batch.
      const auto hidden = static_cast<std::ptrdiff_t>(h);
#pragma omp parallel for
      for (std::ptrdiff_t j = 0; j < hidden; ++j) {
        const double* w = model.hidden_weights.data() + j * d;
        for (std::size_t b = 0; b < batch; ++b) {
          double acc = model.hidden_bias[j];
          const double* x = inputs[b];
          for (std::size_t i = 0; i < d; ++i) acc += w[i] * x[i];
          pre[b * h + j] = acc;
          act[b * h + j] = acc > 0.0 ? acc : 0.0;
        }
      }

      // Output layer and softmax cross-entropy gradient, averaged over batch.
      for (std::size_t b = 0; b < batch; ++b) {
        std::vector<double> z(k);
        for (std::size_t c = 0; c < k; ++c) {
          const double* w = model.output_weights.data() + c * h;
          double acc = model.output_bias[c];
          for (std::size_t j = 0; j < h; ++j) acc += w[j] * act[b * h + j];
          z[c] = acc;
        }
        const int label = dataset.labels[order[start + b]];
        const std::vector<double> p = softmax(z);
        loss_sum += -std::log(std::max(p[label], 1e-300));
        if (argmax(z) == label) ++correct;
        for (std::size_t c = 0; c < k; ++c) {
          dz[b * k + c] = (p[c] - (static_cast<int>(c) == label ? 1.0 : 0.0)) /
                          static_cast<double>(batch);
        }
      }

      // Backpropagate into the hidden layer with the pre-update output weights.
      for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t j = 0; j < h; ++j) {
          double acc = 0.0;
          if (pre[b * h + j] > 0.0) {
            for (std::size_t c = 0; c < k; ++c) {
              acc += model.output_weights[c * h + j] * dz[b * k + c];
            }
          }
          dh[b * h + j] = acc;
        }
      }

      const double lr = config.learning_rate;
      for (std::size_t c = 0; c < k; ++c) {
        double gb = 0.0;
        for (std::size_t b = 0; b < batch; ++b) {
          const double g = dz[b * k + c];
          gb += g;
          double* w = model.output_weights.data() + c * h;
          for (std::size_t j = 0; j < h; ++j) w[j] -= lr * g * act[b * h + j];
        }
        model.output_bias[c] -= lr * gb;
      }

#pragma omp parallel for
      for (std::ptrdiff_t j = 0; j < hidden; ++j) {
        double* w = model.hidden_weights.data() + j * d;
        double gb = 0.0;
        for (std::size_t b = 0; b < batch; ++b) {
          const double g = dh[b * h + j];
          if (g == 0.0) continue;
          gb += g;
          const double step = lr * g;
          const double* x = inputs[b];
          for (std::size_t i = 0; i < d; ++i) w[i] -= step * x[i];
        }
        model.hidden_bias[j] -= lr * gb;
      }
    }

    const double mean_loss = loss_sum / static_cast<double>(order.size());
    if (!std::isfinite(mean_loss)) {
      throw DivergenceError("training loss became non-finite in epoch " +
                            std::to_string(epoch));
    }
    if (on_epoch) {
      on_epoch(EpochStats{epoch, mean_loss,
                          static_cast<double>(correct) /
                              static_cast<double>(order.size())});
    }
  }
  return model;
}

double accuracy(const BuiltinModel& model, const LabeledDataset& dataset) {
  if (dataset.size() == 0) return 0.0;
  dataset.validate();
  if (dataset.images.front().shape() != model.input_shape) {
    throw ContractError("dataset shape " + dataset.images.front().shape().to_string() +
                        " does not match model input " + model.input_shape.to_string());
  }
  std::size_t correct = 0;
  const auto n = static_cast<std::ptrdiff_t>(dataset.size());
#pragma omp parallel for reduction(+ : correct)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (argmax(logits(model, dataset.images[i])) == dataset.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

}  // namespace recess
