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

#ifndef RECESS_METRICS_HPP_
#define RECESS_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recess/detector.hpp"
#include "recess/image.hpp"
#include "recess/predictor.hpp"

namespace recess {

// Positive class = adversarial.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
};

struct DetectionRates {
  double tpr = 0.0;
  double tnr = 0.0;
  ConfusionCounts counts;
};

// tpr = tp / (tp + fn) over verdicts on adversarial inputs, tnr = tn / (tn +
// fp) over verdicts on benign inputs. Throws ContractError if either list is
// empty.
DetectionRates tpr_tnr(std::span<const Verdict> on_adversarial,
                       std::span<const Verdict> on_benign);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  std::optional<double> alpha;  // unset for the (0,0) and (1,1) anchors
};

// Sorted by fpr. The first point is the (0,0) anchor and the last is the
// (1,1) anchor; interior points are deduplicated by fpr keeping the
// largest tpr.
struct RocCurve {
  std::vector<RocPoint> points;
};

// Builds a curve from interior operating points (any order).
RocCurve make_roc_curve(std::vector<RocPoint> interior);

// Trapezoidal area over fpr. Needs >= 2 points with non-decreasing fpr,
// otherwise ContractError.
double auc(const RocCurve& curve);
double auc(std::span<const RocPoint> points);

struct AlphaSweepRow {
  double alpha = 0.0;
  DetectionRates rates;
};

struct AlphaSweep {
  std::vector<AlphaSweepRow> rows;  // in the order of the alphas given
  RocCurve curve;
};

// One detector operating point per alpha; (fpr, tpr) = (1 - tnr, tpr).
// alphas must be non-empty, strictly descending, inside (0,1].
AlphaSweep roc_over_alpha(std::span<const Image> adversarial,
                          std::span<const Image> benign, Predictor& predictor,
                          std::span<const double> alphas);

// True iff the top-1 label of `noisy` is among the k highest `clean`
// scores (ties broken toward the lower index).
bool topk_agreement(std::span<const double> clean, std::span<const double> noisy,
                    std::size_t k);

// Indices of the k largest scores, ties toward the lower index.
std::vector<int> top_k(std::span<const double> scores, std::size_t k);

struct BenchResult {
  double mean_seconds = 0.0;
  double p95_seconds = 0.0;
  std::uint64_t operation_count = 0;  // multiply-adds over all repetitions
  std::size_t repetitions = 0;
};

// Wall-clock timing of feature_filter on `repetitions` seeded random images.
// With a predictor, each repetition also runs the two predictions of a
// full detection. repetitions must be >= 10.
BenchResult bench_filter(const Shape& shape, std::size_t repetitions,
                         double alpha = 0.8, std::uint64_t seed = 42,
                         Predictor* predictor = nullptr);

// "98.20%"
std::string format_percent(double fraction);

}  // namespace recess

#endif  // RECESS_METRICS_HPP_
