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

#ifndef LATENT_LDP_AUDIT_H_
#define LATENT_LDP_AUDIT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "latent_ldp/bounds.h"
#include "latent_ldp/latent.h"
#include "latent_ldp/mechanism.h"
#include "latent_ldp/random.h"

namespace latent_ldp {

// Worst-case log-likelihood ratio of the mechanism over the clipped box:
// sum over components with lambda_j > 0 of (upper_j - lower_j) / lambda_j.
absl::StatusOr<double> AnalyticEpsilon(const ClipBounds& bounds,
                                       const NoisePlan& plan);

// The under-noised variant lambda_j = s_j w_j / epsilon. It still claims
// epsilon w_j per component, which is what makes it detectable. Audit use
// only.
absl::StatusOr<NoisePlan> MakePaperLiteralNoisePlan(
    const SensitivityProfile& sensitivity, const BudgetAllocation& allocation);

// Largest posterior an adversary can reach when deciding between two equally
// likely inputs: e^eps / (1 + e^eps).
double PosteriorBound(double epsilon);

using RandomizedMap =
    std::function<absl::StatusOr<LatentVector>(const LatentVector&,
                                               RandomSource&)>;

struct MonteCarloOptions {
  int64_t trials = 100000;
  int bins = 20;
  // Output coordinate to histogram.
  size_t coordinate = 0;
  // Bins where either count is below this are ignored.
  int64_t min_count = 5;
  // Normal quantile for the Wilson intervals.
  double z = 3.29;
};

struct EpsilonEstimate {
  double epsilon_hat = 0.0;
  int64_t trials = 0;
  int bins = 0;
  double confidence_margin = 0.0;
  size_t coordinate = 0;
};

// Runs `mech` `trials` times on v and on v_prime, histograms one output
// coordinate over [lower, upper] (values outside fall into the edge bins) and
// returns the largest |ln(count / count')| over bins with enough mass.
absl::StatusOr<EpsilonEstimate> MonteCarloEpsilon(
    const RandomizedMap& mech, const LatentVector& v,
    const LatentVector& v_prime, const ClipBounds& bounds,
    const MonteCarloOptions& options, RandomSource& rng);

// Same runs, every output coordinate histogrammed separately.
absl::StatusOr<std::vector<EpsilonEstimate>> MonteCarloEpsilonPerCoordinate(
    const RandomizedMap& mech, const LatentVector& v,
    const LatentVector& v_prime, const ClipBounds& bounds,
    const MonteCarloOptions& options, RandomSource& rng);

struct SamplerReport {
  double ks_statistic = 0.0;
  double mean_error = 0.0;
  double var_error = 0.0;
};

// Draws n values from Lap(0, lambda) and compares them with the analytic
// distribution.
absl::StatusOr<SamplerReport> SamplerDistributionCheck(RandomSource& rng,
                                                       double lambda,
                                                       int64_t n);

struct AuditConfig {
  double epsilon = 1.0;
  std::vector<double> weights;  // Empty means uniform.
  int64_t trials = 100000;
  int bins = 20;
  uint64_t seed = 0;
  bool paper_literal = false;
  bool post_clip = true;
};

struct AuditReport {
  double configured_epsilon = 0.0;
  double analytic_epsilon = 0.0;
  // Sum of the per-coordinate estimates; noise is independent across
  // coordinates, so the per-coordinate losses compose additively.
  double epsilon_hat = 0.0;
  double margin = 0.0;
  int64_t trials = 0;
  int bins = 0;
  bool violation = false;
  double posterior_bound = 0.0;
  std::vector<EpsilonEstimate> per_coordinate;
};

// Audits the mechanism built from `bounds` and `config` on the pair (v, v').
// A violation is reported when the analytic loss exceeds the configured
// budget or when the estimate exceeds it by more than its margin.
absl::StatusOr<AuditReport> RunAudit(const ClipBounds& bounds,
                                     const AuditConfig& config,
                                     const LatentVector& v,
                                     const LatentVector& v_prime);

// Same, on the box corners v = lower, v' = upper.
absl::StatusOr<AuditReport> RunAudit(const ClipBounds& bounds,
                                     const AuditConfig& config);

std::string AuditReportToJson(const AuditReport& report);

}  // namespace latent_ldp

#endif  // LATENT_LDP_AUDIT_H_
