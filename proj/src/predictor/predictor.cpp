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

#include "recess/predictor.hpp"

#include <sstream>

#include "recess/error.hpp"

namespace recess {

BuiltinPredictor::BuiltinPredictor(std::shared_ptr<const BuiltinModel> model)
    : model_(std::move(model)) {
  if (!model_) throw ContractError("builtin predictor needs a model");
  model_->validate();
}

Prediction BuiltinPredictor::predict(const Image& image) {
  const std::vector<double> z = logits(*model_, image);
  return Prediction{argmax(z), softmax(z)};
}

std::unique_ptr<Predictor> make_predictor(const std::string& spec) {
  constexpr std::string_view kBuiltin = "builtin:";
  constexpr std::string_view kExec = "exec:";
  if (spec.starts_with(kBuiltin)) {
    const std::string path = spec.substr(kBuiltin.size());
    if (path.empty()) throw ParameterError("builtin predictor needs a model path");
    return std::make_unique<BuiltinPredictor>(
        std::make_shared<const BuiltinModel>(load_model(path)));
  }
  if (spec.starts_with(kExec)) {
    std::istringstream words(spec.substr(kExec.size()));
    std::vector<std::string> argv;
    for (std::string word; words >> word;) argv.push_back(word);
    if (argv.empty()) throw ParameterError("exec predictor needs a command");
    return std::make_unique<ExternalPredictor>(std::move(argv));
  }
  throw ParameterError("predictor '" + spec +
                       "' must start with 'builtin:' or 'exec:'");
}

}  // namespace recess
