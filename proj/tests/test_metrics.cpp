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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "recess/error.hpp"
#include "recess/metrics.hpp"
#include "recess/predictor.hpp"

using namespace recess;

namespace {

std::vector<Verdict> verdicts(std::size_t flagged, std::size_t passed) {
  std::vector<Verdict> v;
  for (std::size_t i = 0; i < flagged; ++i) v.push_back(Verdict{Decision::kAdversarial, 0, 1, 0.5});
  for (std::size_t i = 0; i < passed; ++i) v.push_back(Verdict{Decision::kBenign, 0, 0, 0.5});
  return v;
}

std::vector<std::pair<double, double>> xy(const RocCurve& c) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : c.points) out.emplace_back(p.fpr, p.tpr);
  return out;
}

// Predictor flagging by a pixel: images whose first pixel exceeds 0.5 get a
// label that the low-pass cannot preserve.
class StubPredictor : public Predictor {
 public:
  explicit StubPredictor(bool always_flip) : always_flip_(always_flip) {}
  Prediction predict(const Image& image) override {
    ++calls_;
    if (always_flip_) return Prediction{calls_ % 2, std::nullopt};
    return Prediction{0, std::nullopt};
  }

 private:
  bool always_flip_;
  int calls_ = 0;
};

}  // namespace

TEST(Rates, DefinitionAndDegenerateDetector) {
  const auto r = tpr_tnr(verdicts(98, 2), verdicts(3, 97));
  EXPECT_DOUBLE_EQ(r.tpr, 0.98);
  EXPECT_DOUBLE_EQ(r.tnr, 0.97);
  EXPECT_EQ(r.counts.tp, 98u);
  EXPECT_EQ(r.counts.fn, 2u);
  EXPECT_EQ(r.counts.tn, 97u);
  EXPECT_EQ(r.counts.fp, 3u);
  const auto none = tpr_tnr(verdicts(0, 10), verdicts(0, 10));
  EXPECT_EQ(none.tpr, 0.0);
  EXPECT_EQ(none.tnr, 1.0);
  EXPECT_THROW(tpr_tnr({}, verdicts(1, 1)), ContractError);
  EXPECT_THROW(tpr_tnr(verdicts(1, 1), {}), ContractError);
}

TEST(Rates, PermutationInvariant) {
  std::mt19937_64 rng(71);
  auto adv = verdicts(13, 8);
  auto ben = verdicts(4, 30);
  const auto before = tpr_tnr(adv, ben);
  std::shuffle(adv.begin(), adv.end(), rng);
  std::shuffle(ben.begin(), ben.end(), rng);
  const auto after = tpr_tnr(adv, ben);
  EXPECT_EQ(before.tpr, after.tpr);
  EXPECT_EQ(before.tnr, after.tnr);
}

TEST(PercentFormat, TwoDecimals) {
  EXPECT_EQ(format_percent(0.982), "98.20%");
  EXPECT_EQ(format_percent(1.0), "100.00%");
  EXPECT_EQ(format_percent(0.0), "0.00%");
  EXPECT_EQ(format_percent(0.66), "66.00%");
}

TEST(Roc, AnchorsAndDeduplication) {
  const RocCurve anchors = make_roc_curve({});
  ASSERT_EQ(anchors.points.size(), 2u);
  EXPECT_EQ(auc(anchors), 0.5);

  const RocCurve c = make_roc_curve({{0.3, 0.6, 0.9}, {0.1, 0.5, 0.95}, {0.3, 0.8, 0.8}});
  ASSERT_EQ(c.points.size(), 4u);
  EXPECT_EQ(c.points[1].fpr, 0.1);
  EXPECT_EQ(c.points[2].tpr, 0.8);
  EXPECT_EQ(c.points[2].alpha, 0.8);
  EXPECT_FALSE(c.points.front().alpha);
  EXPECT_FALSE(c.points.back().alpha);
  EXPECT_THROW(make_roc_curve({{1.2, 0.5, 0.5}}), ContractError);
}

TEST(Auc, HandValues) {
  EXPECT_DOUBLE_EQ(auc(make_roc_curve({{0.2, 0.9, 0.8}})), 0.85);
  EXPECT_DOUBLE_EQ(oracle::shoelace_auc({{0, 0}, {0.2, 0.9}, {1, 1}}), 0.85);
  EXPECT_DOUBLE_EQ(auc(make_roc_curve({{0.0, 1.0, 0.8}})), 1.0);
  EXPECT_DOUBLE_EQ(auc(make_roc_curve({{1.0, 1.0, 0.8}})), 0.5);
  const std::vector<RocPoint> unsorted{{0.0, 0.0, {}}, {0.5, 0.5, {}}, {0.4, 0.6, {}}};
  EXPECT_THROW(auc(unsorted), ContractError);
  EXPECT_THROW(auc(std::vector<RocPoint>{{0.0, 0.0, {}}}), ContractError);
}

TEST(Auc, MatchesShoelaceOracleOnRandomCurves) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<RocPoint> interior;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) interior.push_back({u(rng), u(rng), 0.5});
    const RocCurve c = make_roc_curve(interior);
    const double a = auc(c);
    EXPECT_NEAR(a, oracle::shoelace_auc(xy(c)), 1e-12);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
}

TEST(AlphaSweep, SinglePointAndExtremes) {
  const std::vector<Image> adv(3, Image::filled(Shape{4, 4, 1}, 0.2));
  const std::vector<Image> ben(4, Image::filled(Shape{4, 4, 1}, 0.8));
  StubPredictor never(false);
  const std::vector<double> one{0.5};
  const AlphaSweep s = roc_over_alpha(adv, ben, never, one);
  EXPECT_EQ(s.curve.points.size(), 3u);
  EXPECT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0].rates.tpr, 0.0);
  EXPECT_EQ(s.rows[0].rates.tnr, 1.0);

  // Labels differ on every call pair: flags everything, the chance diagonal.
  StubPredictor always(true);
  const std::vector<double> alphas{0.9, 0.7, 0.5};
  const AlphaSweep all = roc_over_alpha(adv, ben, always, alphas);
  EXPECT_DOUBLE_EQ(auc(all.curve), 0.5);
  const std::vector<double> ascending{0.5, 0.9};
  EXPECT_THROW(roc_over_alpha(adv, ben, never, ascending), ParameterError);
  EXPECT_THROW(roc_over_alpha({}, ben, never, one), ContractError);
}

TEST(TopK, MembershipAndTies) {
  const std::vector<double> clean{0.1, 0.5, 0.3, 0.0, 0.2, 0.05, 0.0, 0.6, 0.0, 0.4};
  EXPECT_EQ(top_k(clean, 3), (std::vector<int>{7, 1, 9}));
  std::vector<double> noisy(10, 0.0);
  noisy[9] = 1.0;
  EXPECT_TRUE(topk_agreement(clean, noisy, 5));
  noisy[9] = 0.0;
  noisy[3] = 1.0;
  EXPECT_FALSE(topk_agreement(clean, noisy, 5));
  EXPECT_TRUE(topk_agreement(clean, clean, 1));
  EXPECT_EQ(top_k(std::vector<double>{1.0, 1.0, 1.0}, 2), (std::vector<int>{0, 1}));
  EXPECT_THROW(top_k(clean, 0), ParameterError);
  EXPECT_THROW(top_k(clean, 11), ParameterError);
  EXPECT_THROW(topk_agreement(clean, std::vector<double>(9, 0.0), 1), ContractError);
}

TEST(Bench, OperationCountsAreDeterministic) {
  const auto a = bench_filter(Shape{32, 32, 3}, 10, 0.8, 42);
  const auto b = bench_filter(Shape{32, 32, 3}, 10, 0.8, 42);
  EXPECT_EQ(a.operation_count, b.operation_count);
  EXPECT_EQ(a.repetitions, 10u);
  EXPECT_GT(a.mean_seconds, 0.0);
  EXPECT_GE(a.p95_seconds, 0.0);
  EXPECT_THROW(bench_filter(Shape{32, 32, 3}, 9), ParameterError);
}
