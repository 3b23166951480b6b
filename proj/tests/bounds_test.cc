// Copyright 2026 The Latent LDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "latent_ldp/bounds.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

namespace latent_ldp {
namespace {

LatentMatrix Column(const std::vector<double>& values) {
  std::vector<std::vector<double>> rows;
  for (double v : values) rows.push_back({v});
  return *LatentMatrix::FromRows(rows);
}

LatentMatrix RandomMatrix(std::mt19937_64& gen, size_t n, size_t m) {
  std::normal_distribution<double> dist(0.0, 3.0);
  std::vector<double> values(n * m);
  for (double& v : values) v = dist(gen);
  return *LatentMatrix::Create(n, m, std::move(values));
}

// O(n^2) oracle: largest pairwise absolute difference per component.
std::vector<double> PairwiseOracle(const LatentMatrix& data) {
  std::vector<double> s(data.cols(), 0.0);
  for (size_t j = 0; j < data.cols(); ++j) {
    for (size_t i = 0; i < data.rows(); ++i) {
      for (size_t k = 0; k < data.rows(); ++k) {
        s[j] = std::max(s[j], std::abs(data.at(i, j) - data.at(k, j)));
      }
    }
  }
  return s;
}

TEST(RawSensitivityTest, MaxMinusMin) {
  EXPECT_EQ(ComputeRawSensitivity(Column({1, 3, 7}))->s,
            std::vector<double>{6});
}

TEST(RawSensitivityTest, SingleRowIsZero) {
  auto data = *LatentMatrix::FromRows({{1.5, -2, 8}});
  EXPECT_EQ(ComputeRawSensitivity(data)->s, std::vector<double>(3, 0.0));
}

TEST(RawSensitivityTest, MatchesPairwiseOracle) {
  std::mt19937_64 gen(2024);
  const LatentMatrix data = RandomMatrix(gen, 50, 4);
  EXPECT_EQ(ComputeRawSensitivity(data)->s, PairwiseOracle(data));
}

TEST(QuantileTest, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(*Quantile({3, 1, 4, 2}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(*Quantile({0, 1, 2, 3, 4}, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(*Quantile({5}, 0.3), 5.0);
  EXPECT_FALSE(Quantile({}, 0.5).ok());
  EXPECT_FALSE(Quantile({1, 2}, 1.5).ok());
}

TEST(ClipBoundsTest, Examples) {
  const LatentMatrix data = Column({0, 1, 2, 3, 4});
  ClipBounds full = *ComputeClipBounds(data, 0.0, 1.0);
  EXPECT_EQ(full.lower[0], 0.0);
  EXPECT_EQ(full.upper[0], 4.0);
  ClipBounds median = *ComputeClipBounds(data, 0.5, 0.5);
  EXPECT_EQ(median.lower[0], 2.0);
  EXPECT_EQ(median.upper[0], 2.0);
  ClipBounds quarter = *ComputeClipBounds(Column({1, 2, 3, 4}), 0.25, 0.75);
  EXPECT_DOUBLE_EQ(quarter.lower[0], 1.75);
  EXPECT_DOUBLE_EQ(quarter.upper[0], 3.25);
}

TEST(ClipBoundsTest, InvalidLevelsRejected) {
  const LatentMatrix data = Column({0, 1});
  EXPECT_FALSE(ComputeClipBounds(data, 0.8, 0.2).ok());
  EXPECT_FALSE(ComputeClipBounds(data, -0.1, 0.2).ok());
  EXPECT_FALSE(ComputeClipBounds(data, 0.1, 1.2).ok());
}

TEST(ClipBoundsTest, WideningLevelsNeverShrinksBounds) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const LatentMatrix data = RandomMatrix(gen, 1 + gen() % 30, 1 + gen() % 5);
    double a = unit(gen), b = unit(gen);
    const double p_low = std::min(a, b), p_high = std::max(a, b);
    const double p_low2 = p_low * unit(gen);
    const double p_high2 = p_high + (1.0 - p_high) * unit(gen);
    ClipBounds narrow = *ComputeClipBounds(data, p_low, p_high);
    ClipBounds wide = *ComputeClipBounds(data, p_low2, p_high2);
    for (size_t j = 0; j < data.cols(); ++j) {
      EXPECT_LE(wide.lower[j], narrow.lower[j]);
      EXPECT_GE(wide.upper[j], narrow.upper[j]);
      EXPECT_LE(narrow.lower[j], narrow.upper[j]);
    }
  }
}

TEST(ClipTest, InteriorUnchangedAndSaturation) {
  ClipBounds b{.lower = {0, -1}, .upper = {4, 1}};
  auto inside = *LatentVector::Create({2.0, 0.5});
  EXPECT_EQ(*Clip(inside, b), inside);
  auto outside = *LatentVector::Create({14.0, -3.0});
  auto clipped = *Clip(outside, b);
  EXPECT_EQ(clipped[0], 4.0);
  EXPECT_EQ(clipped[1], -1.0);
  EXPECT_FALSE(Clip(*LatentVector::Create({1.0}), b).ok());
}

TEST(ClipTest, BoxIdempotenceAndMonotonicity) {
  std::mt19937_64 gen(99);
  std::normal_distribution<double> wide(0.0, 10.0);
  std::uniform_real_distribution<double> step(0.0, 5.0);
  ClipBounds b{.lower = {-2, 0, 3}, .upper = {2, 0, 8}};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> x(3), y(3);
    for (size_t j = 0; j < 3; ++j) {
      x[j] = wide(gen);
      y[j] = x[j] + step(gen);
    }
    auto cx = *Clip(*LatentVector::Create(x), b);
    auto cy = *Clip(*LatentVector::Create(y), b);
    EXPECT_EQ(*Clip(cx, b), cx);
    for (size_t j = 0; j < 3; ++j) {
      EXPECT_GE(cx[j], b.lower[j]);
      EXPECT_LE(cx[j], b.upper[j]);
      EXPECT_LE(cx[j], cy[j]);
    }
  }
}

TEST(SensitivityFromBoundsTest, Width) {
  ClipBounds b{.lower = {0, 2}, .upper = {4, 2}};
  EXPECT_EQ(SensitivityFromBounds(b)->s, (std::vector<double>{4, 0}));
  ClipBounds bad{.lower = {1}, .upper = {0}};
  EXPECT_FALSE(SensitivityFromBounds(bad).ok());
}

TEST(SensitivityFromBoundsTest, FullRangeAgreesWithRawSensitivity) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 50; ++trial) {
    const LatentMatrix data = RandomMatrix(gen, 1 + gen() % 40, 1 + gen() % 6);
    EXPECT_EQ(SensitivityFromBounds(*ComputeClipBounds(data, 0, 1))->s,
              ComputeRawSensitivity(data)->s);
  }
}

TEST(SensitivityProfileTest, MaxSummary) {
  EXPECT_EQ((SensitivityProfile{{1, 5, 2}}.Max()), 5.0);
}

TEST(BoundsJsonTest, RoundTrip) {
  ClipBounds b{.lower = {0.1, -1.0 / 3.0}, .upper = {0.7, 2.0 / 3.0},
               .p_low = 0.1, .p_high = 0.9};
  absl::StatusOr<ClipBounds> back = BoundsFromJson(BoundsToJson(b));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->lower, b.lower);
  EXPECT_EQ(back->upper, b.upper);
  EXPECT_EQ(back->p_low, b.p_low);
  EXPECT_EQ(back->p_high, b.p_high);
  EXPECT_NE(BoundsToJson(b).find("\"sensitivity\""), std::string::npos);
}

TEST(BoundsJsonTest, RejectsMalformed) {
  EXPECT_FALSE(BoundsFromJson("not json").ok());
  EXPECT_FALSE(BoundsFromJson(R"({"p_low":0,"p_high":1,"lower":[1]})").ok());
  EXPECT_FALSE(
      BoundsFromJson(R"({"p_low":0,"p_high":1,"lower":[2],"upper":[1]})").ok());
}

}  // namespace
}  // namespace latent_ldp
