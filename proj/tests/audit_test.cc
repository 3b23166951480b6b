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

#include "latent_ldp/audit.h"

#include <algorithm>

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "json.hpp"

namespace latent_ldp {
namespace {

ClipBounds Box(std::vector<double> lower, std::vector<double> upper) {
  return ClipBounds{.lower = std::move(lower), .upper = std::move(upper)};
}

LatentVector Vec(std::vector<double> v) { return *LatentVector::Create(v); }

RandomizedMap MechanismFor(const ClipBounds& bounds, const NoisePlan& plan) {
  return [bounds, plan](const LatentVector& x, RandomSource& rng) {
    return Privatize(x, bounds, plan, rng);
  };
}

TEST(AnalyticEpsilonTest, CorrectedPlanSpendsExactlyEpsilon) {
  ClipBounds b = Box({0, -1, 5}, {4, 2, 5.5});
  BudgetAllocation a = *BudgetAllocation::Create(3.0, {0.2, 0.3, 0.5});
  NoisePlan plan = *MakeNoisePlan(*SensitivityFromBounds(b), a);
  EXPECT_NEAR(*AnalyticEpsilon(b, plan), 3.0, 1e-12);
}

TEST(AnalyticEpsilonTest, DoublingScalesHalvesLoss) {
  ClipBounds b = Box({0, 0}, {1, 3});
  NoisePlan plan = *MakeNoisePlan(*SensitivityFromBounds(b),
                                  *BudgetAllocation::Uniform(2.0, 2));
  for (double& s : plan.scales) s *= 2.0;
  EXPECT_NEAR(*AnalyticEpsilon(b, plan), 1.0, 1e-12);
}

TEST(AnalyticEpsilonTest, ZeroWidthComponentsContributeNothing) {
  ClipBounds b = Box({0, 2}, {4, 2});
  NoisePlan plan = *MakeNoisePlan(*SensitivityFromBounds(b),
                                  *BudgetAllocation::Uniform(2.0, 2));
  EXPECT_NEAR(*AnalyticEpsilon(b, plan), 1.0, 1e-12);
}

TEST(AnalyticEpsilonTest, PaperLiteralScaleOverspendsBySquaredDimension) {
  ClipBounds b = Box({0, 0, 0, 0}, {4, 4, 4, 4});
  NoisePlan plan = *MakePaperLiteralNoisePlan(
      *SensitivityFromBounds(b), *BudgetAllocation::Uniform(1.0, 4));
  // lambda_j = 4 * (1/4) / 1 = 1, so each component leaks 4.
  EXPECT_EQ(plan.scales, std::vector<double>(4, 1.0));
  EXPECT_NEAR(*AnalyticEpsilon(b, plan), 16.0, 1e-12);
  // It still claims the configured budget.
  EXPECT_NEAR(plan.per_component_epsilon[0] * 4, 1.0, 1e-12);
}

TEST(AnalyticEpsilonTest, DimensionMismatch) {
  NoisePlan plan = *MakeNoisePlan(SensitivityProfile{{1.0}},
                                  *BudgetAllocation::Uniform(1.0, 1));
  EXPECT_FALSE(AnalyticEpsilon(Box({0, 0}, {1, 1}), plan).ok());
}

TEST(PosteriorBoundTest, EpsilonOne) {
  EXPECT_NEAR(PosteriorBound(1.0), std::exp(1.0) / (1.0 + std::exp(1.0)),
              1e-15);
  EXPECT_NEAR(PosteriorBound(1.0), 0.7310585786300049, 1e-15);
  EXPECT_EQ(PosteriorBound(0.0), 0.5);
}

TEST(MonteCarloEpsilonTest, ConstantMapIsIndistinguishable) {
  ClipBounds b = Box({0}, {4});
  RandomizedMap constant = [](const LatentVector&, RandomSource& rng) {
    return LatentVector::Create({4.0 * rng.Uniform()});
  };
  RandomSource rng(1);
  MonteCarloOptions options{.trials = 100000, .bins = 20};
  EpsilonEstimate e =
      *MonteCarloEpsilon(constant, Vec({0}), Vec({4}), b, options, rng);
  EXPECT_LE(e.epsilon_hat, e.confidence_margin);
  EXPECT_EQ(e.trials, 100000);
  EXPECT_EQ(e.bins, 20);

  RandomizedMap fixed = [](const LatentVector&, RandomSource&) {
    return LatentVector::Create({1.0});
  };
  EpsilonEstimate z = *MonteCarloEpsilon(fixed, Vec({0}), Vec({4}), b,
                                         options, rng);
  EXPECT_EQ(z.epsilon_hat, 0.0);
}

TEST(MonteCarloEpsilonTest, CorrectMechanismStaysWithinBudget) {
  ClipBounds b = Box({0}, {4});
  NoisePlan plan = *MakeNoisePlan(*SensitivityFromBounds(b),
                                  *BudgetAllocation::Uniform(1.0, 1));
  RandomSource rng(2);
  EpsilonEstimate e = *MonteCarloEpsilon(
      MechanismFor(b, plan), Vec({0}), Vec({4}), b,
      {.trials = 200000, .bins = 20}, rng);
  EXPECT_LE(e.epsilon_hat, 1.0 + e.confidence_margin);
  // The edge bins come close to the bound.
  EXPECT_GT(e.epsilon_hat, 0.9);
}

TEST(MonteCarloEpsilonTest, DetectsPaperLiteralViolation) {
  ClipBounds b = Box({0, 0, 0, 0}, {4, 4, 4, 4});
  NoisePlan plan = *MakePaperLiteralNoisePlan(
      *SensitivityFromBounds(b), *BudgetAllocation::Uniform(1.0, 4));
  RandomSource rng(3);
  EpsilonEstimate e = *MonteCarloEpsilon(
      MechanismFor(b, plan), Vec({0, 0, 0, 0}), Vec({4, 4, 4, 4}), b,
      {.trials = 100000, .bins = 20, .coordinate = 2}, rng);
  EXPECT_EQ(e.coordinate, 2u);
  EXPECT_GT(e.epsilon_hat - e.confidence_margin, 1.0);
}

TEST(MonteCarloEpsilonTest, RepeatedReleaseComposes) {
  // Two independent releases of the same 1-D value, stacked as a 2-D output.
  ClipBounds one = Box({0}, {4});
  NoisePlan plan = *MakeNoisePlan(*SensitivityFromBounds(one),
                                  *BudgetAllocation::Uniform(1.0, 1));
  ClipBounds two = Box({0, 0}, {4, 4});
  RandomizedMap pair = [&](const LatentVector& x, RandomSource& rng)
      -> absl::StatusOr<LatentVector> {
    auto single = Vec({x[0]});
    auto first = Privatize(single, one, plan, rng);
    auto second = Privatize(single, one, plan, rng);
    return LatentVector::Create({(*first)[0], (*second)[0]});
  };
  RandomSource rng(4);
  auto estimates = *MonteCarloEpsilonPerCoordinate(
      pair, Vec({0, 0}), Vec({4, 4}), two, {.trials = 200000, .bins = 20}, rng);
  double total = 0.0, margin = 0.0;
  for (const auto& e : estimates) {
    total += e.epsilon_hat;
    margin += e.confidence_margin;
  }
  PrivacyAccountant accountant;
  accountant.Charge(plan);
  accountant.Charge(plan);
  EXPECT_NEAR(accountant.Spent(), 2.0, 1e-12);
  EXPECT_LE(total, accountant.Spent() + margin);
  EXPECT_GT(total - margin, 1.0);
}

TEST(MonteCarloEpsilonTest, ParameterValidation) {
  ClipBounds b = Box({0}, {4});
  RandomizedMap id = [](const LatentVector& x, RandomSource&) {
    return absl::StatusOr<LatentVector>(x);
  };
  RandomSource rng(5);
  EXPECT_FALSE(MonteCarloEpsilon(id, Vec({0}), Vec({4}), b,
                                 {.trials = 9999, .bins = 2}, rng)
                   .ok());
  EXPECT_FALSE(MonteCarloEpsilon(id, Vec({0}), Vec({4}), b,
                                 {.trials = 10000, .bins = 101}, rng)
                   .ok());
  EXPECT_FALSE(MonteCarloEpsilon(id, Vec({0}), Vec({4}), b,
                                 {.trials = 10000, .bins = 1}, rng)
                   .ok());
  EXPECT_FALSE(MonteCarloEpsilon(id, Vec({-1}), Vec({4}), b,
                                 {.trials = 10000, .bins = 10}, rng)
                   .ok());
  EXPECT_FALSE(MonteCarloEpsilon(id, Vec({0}), Vec({4}), b,
                                 {.trials = 10000, .bins = 10, .coordinate = 1},
                                 rng)
                   .ok());
}

TEST(MonteCarloEpsilonTest, BinStarvation) {
  ClipBounds b = Box({0}, {4});
  RandomizedMap id = [](const LatentVector& x, RandomSource&) {
    return absl::StatusOr<LatentVector>(x);
  };
  RandomSource rng(6);
  absl::StatusOr<EpsilonEstimate> e = MonteCarloEpsilon(
      id, Vec({0}), Vec({4}), b, {.trials = 10000, .bins = 10}, rng);
  ASSERT_FALSE(e.ok());
  EXPECT_EQ(e.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(SamplerDistributionCheckTest, MatchesLaplace) {
  RandomSource rng(7);
  SamplerReport r = *SamplerDistributionCheck(rng, 1.0, 1000000);
  EXPECT_LT(r.ks_statistic, 0.002);
  EXPECT_LT(r.mean_error, 0.01);
  EXPECT_LT(r.var_error, 0.05);
}

TEST(SamplerDistributionCheckTest, DetectsWrongScale) {
  // Samples drawn at scale 1 but compared against scale 1.2 must fail KS.
  RandomSource rng(8);
  std::vector<double> x(200000);
  for (double& v : x) v = *LaplaceSample(rng, 0.0, 1.0);
  std::sort(x.begin(), x.end());
  double ks = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double f = LaplaceCdf(x[i], 0.0, 1.2);
    ks = std::max({ks, (i + 1.0) / x.size() - f, f - double(i) / x.size()});
  }
  EXPECT_GT(ks, 0.002);
  RandomSource rng2(8);
  EXPECT_FALSE(SamplerDistributionCheck(rng2, 1.0, 1000).ok());
  EXPECT_FALSE(SamplerDistributionCheck(rng2, 0.0, 100000).ok());
}

TEST(RunAuditTest, CorrectMechanismPasses) {
  ClipBounds b = Box({0, -1, 2}, {4, 1, 3});
  AuditConfig config{.epsilon = 2.0, .trials = 50000, .bins = 20, .seed = 1};
  AuditReport r = *RunAudit(b, config);
  EXPECT_NEAR(r.analytic_epsilon, 2.0, 1e-12);
  EXPECT_FALSE(r.violation);
  EXPECT_EQ(r.per_coordinate.size(), 3u);
  EXPECT_LE(r.epsilon_hat, 2.0 + r.margin);
}

TEST(RunAuditTest, PaperLiteralIsViolation) {
  ClipBounds b = Box({0, 0, 0, 0}, {4, 4, 4, 4});
  AuditConfig config{.epsilon = 1.0, .trials = 50000, .bins = 20, .seed = 2,
                     .paper_literal = true};
  AuditReport r = *RunAudit(b, config);
  EXPECT_NEAR(r.analytic_epsilon, 16.0, 1e-12);
  EXPECT_TRUE(r.violation);
  EXPECT_GT(r.epsilon_hat - r.margin, 1.0);

  nlohmann::json doc = nlohmann::json::parse(AuditReportToJson(r));
  EXPECT_EQ(doc["verdict"], "violation");
  EXPECT_EQ(doc["trials"], 50000);
  EXPECT_EQ(doc["bins"], 20);
  EXPECT_TRUE(doc.contains("analytic_epsilon"));
  EXPECT_TRUE(doc.contains("epsilon_hat"));
  EXPECT_TRUE(doc.contains("margin"));
}

}  // namespace
}  // namespace latent_ldp
