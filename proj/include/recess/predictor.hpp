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

#ifndef RECESS_PREDICTOR_HPP_
#define RECESS_PREDICTOR_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <sys/types.h>

#include "recess/image.hpp"
#include "recess/model.hpp"

namespace recess {

// Class label plus optional scores. When scores are present the label is
// their argmax (ties to the lowest index).
struct Prediction {
  int label = 0;
  std::optional<std::vector<double>> scores;
};

class Predictor {
 public:
  virtual ~Predictor() = default;

  // Deterministic for equal inputs. Throws ContractError on a shape the
  // predictor cannot accept and TransportError when an external process
  // fails.
  virtual Prediction predict(const Image& image) = 0;

  // True when predict() may be called from several threads at once.
  virtual bool concurrent() const { return false; }
};

class BuiltinPredictor : public Predictor {
 public:
  explicit BuiltinPredictor(std::shared_ptr<const BuiltinModel> model);

  // Label is argmax of the logits; scores are their softmax.
  Prediction predict(const Image& image) override;
  bool concurrent() const override { return true; }

  const BuiltinModel& model() const { return *model_; }

 private:
  std::shared_ptr<const BuiltinModel> model_;
};

// Spawns `argv` and speaks the line-delimited JSON protocol of wire.hpp
// over its stdin/stdout. One request in flight at a time. On any protocol
// violation the child is killed and a TransportError is thrown; the handle
// is unusable afterwards. The child's stderr is inherited.
class ExternalPredictor : public Predictor {
 public:
  explicit ExternalPredictor(std::vector<std::string> argv);
  ~ExternalPredictor() override;

  ExternalPredictor(const ExternalPredictor&) = delete;
  ExternalPredictor& operator=(const ExternalPredictor&) = delete;

  Prediction predict(const Image& image) override;

  bool alive() const { return pid_ > 0; }

 private:
  [[noreturn]] void fail(const std::string& message);
  void shutdown(bool force);
  std::string read_line();

  std::vector<std::string> argv_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::uint64_t next_id_ = 0;
  std::string buffer_;
};

// Forwards labels only, dropping scores. Handy for proving a consumer never
// depends on them.
class LabelOnlyPredictor : public Predictor {
 public:
  explicit LabelOnlyPredictor(Predictor& inner) : inner_(inner) {}
  Prediction predict(const Image& image) override {
    return Prediction{inner_.predict(image).label, std::nullopt};
  }
  bool concurrent() const override { return inner_.concurrent(); }

 private:
  Predictor& inner_;
};

// "builtin:<model-file>" or "exec:<command line>". The command line is split
// on whitespace. Throws ParameterError on any other form.
std::unique_ptr<Predictor> make_predictor(const std::string& spec);

}  // namespace recess

#endif  // RECESS_PREDICTOR_HPP_
