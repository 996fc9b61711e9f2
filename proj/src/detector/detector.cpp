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

#include "recess/detector.hpp"

#include <exception>

#include "recess/error.hpp"

namespace recess {
namespace {

Verdict compare(int original, int filtered, std::optional<double> alpha) {
  return Verdict{original == filtered ? Decision::kBenign : Decision::kAdversarial,
                 original, filtered, alpha};
}

// Rethrows `error` as the same category with "image <index>: " prepended.
[[noreturn]] void rethrow_with_index(std::exception_ptr error, std::size_t index) {
  const std::string where = "image " + std::to_string(index) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const TransportError& e) {
    throw TransportError(where + e.what());
  } catch (const ContractError& e) {
    throw ContractError(where + e.what());
  } catch (const ParameterError& e) {
    throw ParameterError(where + e.what());
  } catch (const Error& e) {
    throw Error(where + e.what());
  }
}

std::vector<Verdict> run_batch(std::span<const Image> images, Predictor& predictor,
                               const std::function<Verdict(const Image&)>& one) {
  std::vector<std::optional<Verdict>> slots(images.size());
  std::vector<std::exception_ptr> errors(images.size());
  const auto n = static_cast<std::ptrdiff_t>(images.size());
  if (predictor.concurrent()) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        slots[i] = one(images[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        slots[i] = one(images[i]);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  }
  std::vector<Verdict> verdicts;
  verdicts.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (errors[i]) rethrow_with_index(errors[i], i);
    verdicts.push_back(*slots[i]);
  }
  return verdicts;
}

}  // namespace

const char* to_string(Decision decision) {
  return decision == Decision::kBenign ? "benign" : "adversarial";
}

Verdict detect(const Image& image, Predictor& predictor, const FilterSpec& spec) {
  const Image filtered = feature_filter(image, spec);
  const int original = predictor.predict(image).label;
  const int after = predictor.predict(filtered).label;
  return compare(original, after, spec.alpha());
}

Verdict detect_with(const Image& image, Predictor& predictor,
                    const Transform& transform) {
  const Image transformed = transform(image);
  const int original = predictor.predict(image).label;
  const int after = predictor.predict(transformed).label;
  return compare(original, after, std::nullopt);
}

std::vector<Verdict> batch_detect(std::span<const Image> images,
                                  Predictor& predictor, const FilterSpec& spec) {
  return run_batch(images, predictor,
                   [&](const Image& image) { return detect(image, predictor, spec); });
}

std::vector<Verdict> batch_detect_with(std::span<const Image> images,
                                       Predictor& predictor,
                                       const Transform& transform) {
  return run_batch(images, predictor, [&](const Image& image) {
    return detect_with(image, predictor, transform);
  });
}

}  // namespace recess
