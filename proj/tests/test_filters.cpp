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
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "recess/error.hpp"
#include "recess/filters.hpp"
#include "recess/transform.hpp"

using namespace recess;

TEST(FilterSpec, RangeAndKeptCounts) {
  EXPECT_THROW(FilterSpec(0.0), ParameterError);
  EXPECT_THROW(FilterSpec(1.0000001), ParameterError);
  EXPECT_THROW(FilterSpec(-0.5), ParameterError);
  EXPECT_THROW(FilterSpec(std::nan("")), ParameterError);
  EXPECT_EQ(FilterSpec(1.0).kept_rows(32), 32u);
  EXPECT_EQ(FilterSpec(0.5).kept_rows(32), 16u);
  EXPECT_EQ(FilterSpec(0.8).kept_cols(32), 25u);   // floor(25.6)
  EXPECT_EQ(FilterSpec(0.7).kept_rows(10), 7u);    // 7.000000000000001 or 6.999999999999999
  EXPECT_EQ(FilterSpec(0.01).kept_rows(32), 1u);   // DC always kept
  EXPECT_EQ(FilterSpec(0.95).kept_rows(224), 212u);
}

TEST(FeatureFilter, MatchesBruteForceOracle) {
  std::mt19937_64 rng(21);
  for (double alpha : {0.5, 0.8, 0.95, 0.3}) {
    const Image img = oracle::random_image(rng, Shape{32, 32, 3});
    EXPECT_LE(max_abs_diff(feature_filter(img, FilterSpec(alpha)),
                           oracle::feature_filter(img, alpha)),
              1e-9)
        << alpha;
  }
  const Image odd = oracle::random_image(rng, Shape{9, 13, 1});
  EXPECT_LE(max_abs_diff(feature_filter(odd, FilterSpec(0.6)), oracle::feature_filter(odd, 0.6)),
            1e-9);
}

TEST(FeatureFilter, AlphaOneIsIdentity) {
  std::mt19937_64 rng(22);
  const Image img = oracle::random_image(rng, Shape{32, 32, 3});
  EXPECT_LE(max_abs_diff(feature_filter(img, FilterSpec(1.0)), img), 1e-10);
}

TEST(FeatureFilter, ConstantImageIsFixedPoint) {
  for (double value : {0.0, 0.37, 1.0}) {
    const Image img = Image::filled(Shape{32, 32, 3}, value);
    for (double alpha : {0.05, 0.5, 0.9}) {
      EXPECT_LE(max_abs_diff(feature_filter(img, FilterSpec(alpha)), img), 1e-12);
    }
  }
}

// Band-limited image whose values stay inside [0,1], so the filter never clips.
Image smooth_image(std::mt19937_64& rng, const Shape& shape, double alpha) {
  std::normal_distribution<double> coef(0.0, 0.02);
  Spectrum s{shape, std::vector<double>(shape.size(), 0.0)};
  const FilterSpec spec(alpha);
  for (std::size_t u = 0; u < spec.kept_rows(shape.height); ++u)
    for (std::size_t v = 0; v < spec.kept_cols(shape.width); ++v)
      for (std::size_t c = 0; c < shape.channels; ++c) s.coefficients[shape.index(u, v, c)] = coef(rng);
  for (std::size_t c = 0; c < shape.channels; ++c)
    s.coefficients[shape.index(0, 0, c)] = 0.5 * std::sqrt(static_cast<double>(shape.height * shape.width));
  return Image(shape, idct_image(s).values);
}

// Out-of-band residue that clamping adds to the first pass, per pixel.
std::vector<double> clip_residue(const Image& image, const FilterSpec& spec) {
  Spectrum s = dct_image(image);
  const Shape& shape = image.shape();
  for (std::size_t u = 0; u < shape.height; ++u)
    for (std::size_t v = 0; v < shape.width; ++v)
      if (u >= spec.kept_rows(shape.height) || v >= spec.kept_cols(shape.width))
        for (std::size_t c = 0; c < shape.channels; ++c) s.coefficients[shape.index(u, v, c)] = 0.0;
  std::vector<double> r = idct_image(s).values;
  for (double& x : r) x -= std::clamp(x, 0.0, 1.0);
  return r;
}

double l2(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

TEST(FeatureFilter, IdempotentWithoutClipping) {
  std::mt19937_64 rng(23);
  for (double alpha : {0.5, 0.6, 0.8, 0.95}) {
    const Image img = smooth_image(rng, Shape{32, 32, 3}, 1.0);
    const FilterSpec spec(alpha);
    ASSERT_EQ(l2(clip_residue(img, spec)), 0.0);
    const Image once = feature_filter(img, spec);
    EXPECT_LE(max_abs_diff(feature_filter(once, spec), once), 1e-12);
  }
}

// With clipping the second pass removes the residue's in-band part again,
// so the drift is bounded by the residue in L2, not zero.
TEST(FeatureFilter, SecondPassDriftBoundedByClipResidue) {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 10; ++i) {
    const Image img = oracle::random_image(rng, Shape{32, 32, 3});
    const FilterSpec spec(0.6);
    const Image once = feature_filter(img, spec);
    const Image twice = feature_filter(once, spec);
    std::vector<double> drift(once.pixels().size());
    for (std::size_t k = 0; k < drift.size(); ++k) drift[k] = twice.pixels()[k] - once.pixels()[k];
    EXPECT_LE(l2(drift), l2(clip_residue(img, spec)) + 1e-9);
  }
}

TEST(FeatureFilter, NeverAddsSpectralEnergyBeforeClipping) {
  std::mt19937_64 rng(24);
  const Image img = oracle::random_image(rng, Shape{32, 32, 3});
  Spectrum s = dct_image(img);
  double before = 0.0;
  for (double c : s.coefficients) before += c * c;
  const FilterSpec spec(0.7);
  double after = 0.0;
  for (std::size_t i = 0; i < s.coefficients.size(); ++i) {
    const std::size_t pixel = i / 3;
    const std::size_t u = pixel / 32, v = pixel % 32;
    if (u < spec.kept_rows(32) && v < spec.kept_cols(32)) after += s.coefficients[i] * s.coefficients[i];
  }
  EXPECT_LE(after, before + 1e-6);
}

TEST(FeatureFilter, ParallelMatchesSerial) {
  std::mt19937_64 rng(25);
  const Image img = oracle::random_image(rng, Shape{80, 96, 3});
  EXPECT_EQ(feature_filter(img, FilterSpec(0.7)), serial::feature_filter(img, FilterSpec(0.7)));
}

TEST(FeatureFilter, KeptSetGrowsWithAlpha) {
  std::size_t last = 0;
  for (double alpha : {0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95}) {
    const std::size_t k = FilterSpec(alpha).kept_rows(32);
    EXPECT_GE(k, last);
    last = k;
  }
  EXPECT_LT(feature_filter_cost(Shape{32, 32, 3}, FilterSpec(0.5)),
            feature_filter_cost(Shape{32, 32, 3}, FilterSpec(0.9)));
}

TEST(BitDepth, RoundingRuleAndLevels) {
  const Image img(Shape{1, 3, 1}, {0.4, 0.6, 0.5});
  const Image one = bit_depth_reduce(img, 1);
  EXPECT_EQ(one.pixels()[0], 0.0);
  EXPECT_EQ(one.pixels()[1], 1.0);
  EXPECT_EQ(one.pixels()[2], 1.0);  // half rounds away from zero

  std::vector<double> grid;
  for (int i = 0; i <= 127; ++i) grid.push_back(i / 127.0);
  const Image g(Shape{1, 128, 1}, grid);
  EXPECT_LE(max_abs_diff(bit_depth_reduce(g, 7), g), 1e-15);

  std::mt19937_64 rng(26);
  const Image r = bit_depth_reduce(oracle::random_image(rng, Shape{16, 16, 3}), 3);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto p = r.plane(c);
    EXPECT_LE(std::set<double>(p.begin(), p.end()).size(), 8u);
  }
  EXPECT_THROW(bit_depth_reduce(img, 0), ParameterError);
  EXPECT_THROW(bit_depth_reduce(img, 8), ParameterError);
}

TEST(Median, OutlierRemovedAndConstantKept) {
  std::vector<double> v(9, 0.0);
  v[4] = 1.0;
  const Image spike(Shape{3, 3, 1}, v);
  EXPECT_EQ(median_smooth(spike, 3), Image::filled(Shape{3, 3, 1}, 0.0));
  const Image flat = Image::filled(Shape{5, 5, 3}, 0.3);
  EXPECT_EQ(median_smooth(flat, 2), flat);
}

TEST(Median, MatchesSortOracle) {
  std::mt19937_64 rng(27);
  const Image img = oracle::random_image(rng, Shape{8, 8, 3});
  for (std::size_t k : {2u, 3u, 4u, 5u}) {
    EXPECT_LE(max_abs_diff(median_smooth(img, k), oracle::median(img, k)), 1e-15) << k;
    EXPECT_EQ(median_smooth(img, k), serial::median_smooth(img, k));
  }
  EXPECT_THROW(median_smooth(img, 1), ParameterError);
  EXPECT_THROW(median_smooth(img, 9), ParameterError);
}

TEST(NonLocalMean, MatchesDoubleLoopOracle) {
  std::mt19937_64 rng(28);
  const Image img = oracle::random_image(rng, Shape{8, 8, 1});
  EXPECT_LE(max_abs_diff(non_local_mean(img, 5, 3, 2.0), oracle::nlm(img, 5, 3, 2.0)), 1e-9);
  EXPECT_LE(max_abs_diff(non_local_mean(img, 5, 3, 0.1), oracle::nlm(img, 5, 3, 0.1)), 1e-9);
  const Image rgb = oracle::random_image(rng, Shape{12, 12, 3});
  EXPECT_EQ(non_local_mean(rgb, 7, 3, 0.05), serial::non_local_mean(rgb, 7, 3, 0.05));
}

TEST(NonLocalMean, LargeStrengthApproachesWindowMean) {
  std::mt19937_64 rng(29);
  const Image img = oracle::random_image(rng, Shape{8, 8, 1});
  const Image smooth = non_local_mean(img, 5, 3, 1e6);
  // Uniform weights over the clamped 5x5 search window.
  for (long y = 0; y < 8; ++y)
    for (long x = 0; x < 8; ++x) {
      double sum = 0.0;
      for (long dy = -2; dy <= 2; ++dy)
        for (long dx = -2; dx <= 2; ++dx)
          sum += img.at(oracle::clampi(y + dy, 8), oracle::clampi(x + dx, 8), 0);
      EXPECT_NEAR(smooth.at(y, x, 0), sum / 25.0, 1e-3);
    }
}

TEST(NonLocalMean, ConstantImageAndParameterChecks) {
  const Image flat = Image::filled(Shape{10, 10, 3}, 0.6);
  EXPECT_LE(max_abs_diff(non_local_mean(flat, 5, 3, 0.02), flat), 1e-15);
  EXPECT_THROW(non_local_mean(flat, 4, 3, 1.0), ParameterError);
  EXPECT_THROW(non_local_mean(flat, 3, 3, 1.0), ParameterError);
  EXPECT_THROW(non_local_mean(flat, 5, 3, 0.0), ParameterError);
  EXPECT_THROW(non_local_mean(flat, 13, 3, 1.0), ParameterError);
}

TEST(Rotate, IdentityFullTurnAndConstant) {
  std::mt19937_64 rng(30);
  const Image img = oracle::random_image(rng, Shape{9, 11, 3});
  EXPECT_LE(max_abs_diff(rotate(img, 0.0), img), 1e-12);
  EXPECT_LE(max_abs_diff(rotate(img, 360.0), img), 1e-6);
  const Image flat = Image::filled(Shape{9, 9, 1}, 0.42);
  EXPECT_LE(max_abs_diff(rotate(flat, 17.0), flat), 1e-12);
}

TEST(Rotate, QuarterTurnIsCounterClockwise) {
  // A bright pixel right of centre must land above centre.
  std::vector<double> v(25, 0.0);
  v[2 * 5 + 4] = 1.0;  // (y=2, x=4)
  const Image img(Shape{5, 5, 1}, v);
  const Image r = rotate(img, 90.0);
  EXPECT_NEAR(r.at(0, 2, 0), 1.0, 1e-9);
  EXPECT_NEAR(r.at(2, 4, 0), 0.0, 1e-9);
}
