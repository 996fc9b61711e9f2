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
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

#include "recess/error.hpp"
#include "recess/model.hpp"

namespace recess {
namespace {

constexpr char kMagic[4] = {'R', 'F', 'F', '1'};
constexpr std::size_t kHeaderBytes = 4 + 5 * 4;

void check_input(const BuiltinModel& model, const Shape& shape) {
  if (shape != model.input_shape) {
    throw ContractError("model expects " + model.input_shape.to_string() +
                        " input, got " + shape.to_string());
  }
}

void check_class(const BuiltinModel& model, int label, const char* what) {
  if (label < 0 || static_cast<std::size_t>(label) >= model.classes) {
    throw ContractError(std::string(what) + " " + std::to_string(label) +
                        " outside [0," + std::to_string(model.classes) + ")");
  }
}

// d(loss)/d(logits).
std::vector<double> logit_gradient(const BuiltinModel& model,
                                   std::span<const double> z,
                                   const LossSpec& loss) {
  std::vector<double> grad(z.size(), 0.0);
  if (const auto* ce = std::get_if<CrossEntropyLoss>(&loss)) {
    check_class(model, ce->label, "label");
    grad = softmax(z);
    grad[ce->label] -= 1.0;
    return grad;
  }
  const auto& cw = std::get<CarliniWagnerLoss>(loss);
  check_class(model, cw.target, "target");
  if (model.classes < 2) return grad;
  int best_other = -1;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (static_cast<int>(i) == cw.target) continue;
    if (best_other < 0 || z[i] > z[best_other]) best_other = static_cast<int>(i);
  }
  const double margin = z[best_other] - z[cw.target];
  if (margin > -cw.confidence) {
    grad[best_other] = 1.0;
    grad[cw.target] = -1.0;
  }
  return grad;
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

void put_f64(std::vector<unsigned char>& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

BuiltinModel BuiltinModel::zeros(Shape input_shape, std::size_t hidden,
                                 std::size_t classes) {
  BuiltinModel model;
  model.input_shape = input_shape;
  model.hidden = hidden;
  model.classes = classes;
  model.hidden_weights.assign(hidden * input_shape.size(), 0.0);
  model.hidden_bias.assign(hidden, 0.0);
  model.output_weights.assign(classes * hidden, 0.0);
  model.output_bias.assign(classes, 0.0);
  model.validate();
  return model;
}

void BuiltinModel::validate() const {
  if (input_size() == 0 || hidden == 0 || classes == 0) {
    throw ContractError("model dimensions must be positive");
  }
  if (hidden_weights.size() != hidden * input_size() ||
      hidden_bias.size() != hidden || output_weights.size() != classes * hidden ||
      output_bias.size() != classes) {
    throw ContractError("model tensor sizes disagree with declared dimensions");
  }
}

ForwardPass forward(const BuiltinModel& model, std::span<const double> input) {
  const std::size_t d = model.input_size();
  if (input.size() != d) throw ContractError("model input length mismatch");
  ForwardPass pass;
  pass.pre_activation.resize(model.hidden);
  pass.activation.resize(model.hidden);
  const auto hidden = static_cast<std::ptrdiff_t>(model.hidden);
#pragma omp parallel for if (model.hidden * d >= (1u << 18))
  for (std::ptrdiff_t j = 0; j < hidden; ++j) {
    const double* w = model.hidden_weights.data() + j * d;
    double acc = model.hidden_bias[j];
    for (std::size_t i = 0; i < d; ++i) acc += w[i] * input[i];
    pass.pre_activation[j] = acc;
    pass.activation[j] = acc > 0.0 ? acc : 0.0;
  }
  pass.logits.resize(model.classes);
  for (std::size_t k = 0; k < model.classes; ++k) {
    const double* w = model.output_weights.data() + k * model.hidden;
    double acc = model.output_bias[k];
    for (std::size_t j = 0; j < model.hidden; ++j) acc += w[j] * pass.activation[j];
    pass.logits[k] = acc;
  }
  return pass;
}

std::vector<double> logits(const BuiltinModel& model, const Image& image) {
  check_input(model, image.shape());
  return forward(model, image.pixels()).logits;
}

std::vector<double> softmax(std::span<const double> z) {
  std::vector<double> out(z.size());
  if (z.empty()) return out;
  const double top = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - top);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

int argmax(std::span<const double> values) {
  if (values.empty()) throw ContractError("argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<int>(best);
}

double carlini_wagner_loss(std::span<const double> z, int target,
                           double confidence) {
  if (target < 0 || static_cast<std::size_t>(target) >= z.size()) {
    throw ContractError("target " + std::to_string(target) + " out of range");
  }
  double best_other = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (static_cast<int>(i) != target) best_other = std::max(best_other, z[i]);
  }
  // "+ 0.0" turns -0 into +0 when confidence is 0.
  return std::max(best_other - z[target], -confidence + 0.0);
}

double loss_value(const BuiltinModel& model, const Image& image,
                  const LossSpec& loss) {
  const std::vector<double> z = logits(model, image);
  if (const auto* ce = std::get_if<CrossEntropyLoss>(&loss)) {
    check_class(model, ce->label, "label");
    const double top = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double v : z) total += std::exp(v - top);
    return top + std::log(total) - z[ce->label];
  }
  const auto& cw = std::get<CarliniWagnerLoss>(loss);
  check_class(model, cw.target, "target");
  return carlini_wagner_loss(z, cw.target, cw.confidence);
}

std::vector<double> input_gradient(const BuiltinModel& model,
                                   const Image& image, const LossSpec& loss) {
  check_input(model, image.shape());
  const ForwardPass pass = forward(model, image.pixels());
  const std::vector<double> dz = logit_gradient(model, pass.logits, loss);

  std::vector<double> dh(model.hidden, 0.0);
  for (std::size_t k = 0; k < model.classes; ++k) {
    if (dz[k] == 0.0) continue;
    const double* w = model.output_weights.data() + k * model.hidden;
    for (std::size_t j = 0; j < model.hidden; ++j) dh[j] += dz[k] * w[j];
  }
  const std::size_t d = model.input_size();
  std::vector<double> dx(d, 0.0);
  for (std::size_t j = 0; j < model.hidden; ++j) {
    if (pass.pre_activation[j] <= 0.0 || dh[j] == 0.0) continue;
    const double g = dh[j];
    const double* w = model.hidden_weights.data() + j * d;
    for (std::size_t i = 0; i < d; ++i) dx[i] += g * w[i];
  }
  return dx;
}

void save_model(const BuiltinModel& model, const std::filesystem::path& path) {
  model.validate();
  std::vector<unsigned char> bytes(std::begin(kMagic), std::end(kMagic));
  put_u32(bytes, static_cast<std::uint32_t>(model.input_shape.height));
  put_u32(bytes, static_cast<std::uint32_t>(model.input_shape.width));
  put_u32(bytes, static_cast<std::uint32_t>(model.input_shape.channels));
  put_u32(bytes, static_cast<std::uint32_t>(model.hidden));
  put_u32(bytes, static_cast<std::uint32_t>(model.classes));
  for (const auto* tensor : {&model.hidden_weights, &model.hidden_bias,
                             &model.output_weights, &model.output_bias}) {
    for (double v : *tensor) put_f64(bytes, v);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

BuiltinModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path.string() + "'");
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic),
                                      bytes.begin())) {
    throw FormatError("'" + path.string() + "' is not an RFF1 model file");
  }
  if (bytes.size() < kHeaderBytes) {
    throw FormatError("model header truncated: expected " +
                      std::to_string(kHeaderBytes) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  BuiltinModel model;
  model.input_shape = Shape{get_u32(&bytes[4]), get_u32(&bytes[8]),
                            get_u32(&bytes[12])};
  model.hidden = get_u32(&bytes[16]);
  model.classes = get_u32(&bytes[20]);
  const std::size_t d = model.input_size();
  const std::size_t sizes[] = {model.hidden * d, model.hidden,
                               model.classes * model.hidden, model.classes};
  std::size_t expected = kHeaderBytes;
  for (std::size_t n : sizes) expected += 8 * n;
  if (bytes.size() != expected) {
    throw FormatError("model file '" + path.string() + "' has wrong length: expected " +
                      std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  std::size_t offset = kHeaderBytes;
  std::vector<double>* tensors[] = {&model.hidden_weights, &model.hidden_bias,
                                    &model.output_weights, &model.output_bias};
  for (std::size_t t = 0; t < 4; ++t) {
    tensors[t]->resize(sizes[t]);
    for (std::size_t i = 0; i < sizes[t]; ++i, offset += 8) {
      (*tensors[t])[i] = get_f64(&bytes[offset]);
    }
  }
  model.validate();
  return model;
}

}  // namespace recess
