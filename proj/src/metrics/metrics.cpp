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
#include <cstdio>
#include <numeric>

#include "recess/error.hpp"
#include "recess/metrics.hpp"

namespace recess {

DetectionRates tpr_tnr(std::span<const Verdict> on_adversarial,
                       std::span<const Verdict> on_benign) {
  if (on_adversarial.empty() || on_benign.empty()) {
    throw ContractError("TPR/TNR undefined: need at least one adversarial and one "
                        "benign verdict");
  }
  DetectionRates rates;
  for (const Verdict& v : on_adversarial) {
    (v.decision == Decision::kAdversarial ? rates.counts.tp : rates.counts.fn)++;
  }
  for (const Verdict& v : on_benign) {
    (v.decision == Decision::kBenign ? rates.counts.tn : rates.counts.fp)++;
  }
  rates.tpr = static_cast<double>(rates.counts.tp) /
              static_cast<double>(rates.counts.tp + rates.counts.fn);
  rates.tnr = static_cast<double>(rates.counts.tn) /
              static_cast<double>(rates.counts.tn + rates.counts.fp);
  return rates;
}

RocCurve make_roc_curve(std::vector<RocPoint> interior) {
  for (const RocPoint& p : interior) {
    if (!(p.fpr >= 0.0 && p.fpr <= 1.0 && p.tpr >= 0.0 && p.tpr <= 1.0)) {
      throw ContractError("ROC coordinates must lie in [0,1]");
    }
  }
  std::stable_sort(interior.begin(), interior.end(),
                   [](const RocPoint& a, const RocPoint& b) {
                     return a.fpr < b.fpr || (a.fpr == b.fpr && a.tpr > b.tpr);
                   });
  RocCurve curve;
  curve.points.push_back(RocPoint{0.0, 0.0, std::nullopt});
  for (const RocPoint& p : interior) {
    // Sorted with the larger tpr first among equal fpr, so keep the first.
    if (curve.points.size() > 1 && curve.points.back().fpr == p.fpr) continue;
    curve.points.push_back(p);
  }
  curve.points.push_back(RocPoint{1.0, 1.0, std::nullopt});
  return curve;
}

double auc(std::span<const RocPoint> points) {
  if (points.size() < 2) throw ContractError("AUC needs at least two points");
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double width = points[i].fpr - points[i - 1].fpr;
    if (width < 0.0) throw ContractError("ROC points are not sorted by fpr");
    area += width * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

double auc(const RocCurve& curve) { return auc(curve.points); }

AlphaSweep roc_over_alpha(std::span<const Image> adversarial,
                          std::span<const Image> benign, Predictor& predictor,
                          std::span<const double> alphas) {
  if (adversarial.empty() || benign.empty() || alphas.empty()) {
    throw ContractError("alpha sweep needs adversarial images, benign images and "
                        "at least one alpha");
  }
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] < alphas[i - 1])) {
      throw ParameterError("alphas must be strictly descending");
    }
  }
  AlphaSweep sweep;
  std::vector<RocPoint> interior;
  for (double alpha : alphas) {
    const FilterSpec spec(alpha);
    const auto on_adv = batch_detect(adversarial, predictor, spec);
    const auto on_benign = batch_detect(benign, predictor, spec);
    const DetectionRates rates = tpr_tnr(on_adv, on_benign);
    sweep.rows.push_back(AlphaSweepRow{alpha, rates});
    interior.push_back(RocPoint{1.0 - rates.tnr, rates.tpr, alpha});
  }
  sweep.curve = make_roc_curve(std::move(interior));
  return sweep;
}

std::vector<int> top_k(std::span<const double> scores, std::size_t k) {
  if (k == 0 || k > scores.size()) {
    throw ParameterError("k = " + std::to_string(k) + " outside [1," +
                         std::to_string(scores.size()) + "]");
  }
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  order.resize(k);
  return order;
}

bool topk_agreement(std::span<const double> clean, std::span<const double> noisy,
                    std::size_t k) {
  if (clean.size() != noisy.size()) {
    throw ContractError("score vectors differ in length");
  }
  const std::vector<int> allowed = top_k(clean, k);
  const int label = top_k(noisy, 1).front();
  return std::find(allowed.begin(), allowed.end(), label) != allowed.end();
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", fraction * 100.0);
  return buf;
}

}  // namespace recess
