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

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace latent_ldp {
namespace {

using json = nlohmann::json;

struct Interval {
  double lo;
  double hi;
};

Interval Wilson(int64_t count, int64_t trials, double z) {
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(count) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

size_t BinOf(double value, double lo, double hi, int bins) {
  if (!(hi > lo)) return 0;
  const double t = (value - lo) / (hi - lo) * bins;
  if (!(t > 0.0)) return 0;
  return std::min(static_cast<size_t>(t), static_cast<size_t>(bins - 1));
}

absl::Status ValidateMonteCarlo(const LatentVector& v,
                                const LatentVector& v_prime,
                                const ClipBounds& bounds,
                                const MonteCarloOptions& options) {
  if (options.trials < 10000) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 10^4 trials, got ", options.trials));
  }
  if (options.bins < 2 || options.bins > options.trials / 100) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bins must be in [2, trials/100], got ", options.bins));
  }
  if (options.min_count < 1 || !(options.z > 0.0)) {
    return absl::InvalidArgumentError("invalid count floor or z");
  }
  if (absl::Status s = ValidateBounds(bounds); !s.ok()) return s;
  for (const LatentVector* x : {&v, &v_prime}) {
    if (absl::Status s = CheckSameDim(bounds.dim(), x->dim(), "audit input");
        !s.ok()) {
      return s;
    }
    for (size_t j = 0; j < x->dim(); ++j) {
      if ((*x)[j] < bounds.lower[j] || (*x)[j] > bounds.upper[j]) {
        return absl::InvalidArgumentError(
            absl::StrCat("audit input component ", j, " lies outside bounds"));
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<EpsilonEstimate> EstimateFromCounts(
    const std::vector<int64_t>& first, const std::vector<int64_t>& second,
    const MonteCarloOptions& options, size_t coordinate) {
  EpsilonEstimate estimate;
  estimate.trials = options.trials;
  estimate.bins = options.bins;
  estimate.coordinate = coordinate;
  bool any = false;
  for (size_t b = 0; b < first.size(); ++b) {
    const int64_t c1 = first[b];
    const int64_t c2 = second[b];
    if (c1 < options.min_count || c2 < options.min_count) continue;
    any = true;
    const double point = std::abs(std::log(static_cast<double>(c1) /
                                           static_cast<double>(c2)));
    const Interval i1 = Wilson(c1, options.trials, options.z);
    const Interval i2 = Wilson(c2, options.trials, options.z);
    const double upper = std::max(std::abs(std::log(i1.hi / i2.lo)),
                                  std::abs(std::log(i1.lo / i2.hi)));
    estimate.epsilon_hat = std::max(estimate.epsilon_hat, point);
    estimate.confidence_margin =
        std::max(estimate.confidence_margin, upper - point);
  }
  if (!any) {
    return absl::FailedPreconditionError(absl::StrCat(
        "bin starvation on coordinate ", coordinate, ": no bin holds at least ",
        options.min_count, " samples from both inputs"));
  }
  return estimate;
}

}  // namespace

absl::StatusOr<double> AnalyticEpsilon(const ClipBounds& bounds,
                                       const NoisePlan& plan) {
  if (absl::Status s = CheckSameDim(bounds.dim(), plan.dim(), "noise plan");
      !s.ok()) {
    return s;
  }
  double total = 0.0;
  for (size_t j = 0; j < plan.dim(); ++j) {
    if (plan.scales[j] > 0.0) {
      total += (bounds.upper[j] - bounds.lower[j]) / plan.scales[j];
    }
  }
  return total;
}

absl::StatusOr<NoisePlan> MakePaperLiteralNoisePlan(
    const SensitivityProfile& sensitivity, const BudgetAllocation& allocation) {
  absl::StatusOr<NoisePlan> plan = MakeNoisePlan(sensitivity, allocation);
  if (!plan.ok()) return plan.status();
  for (size_t j = 0; j < plan->dim(); ++j) {
    plan->scales[j] =
        sensitivity.s[j] * allocation.weights()[j] / allocation.epsilon();
  }
  return plan;
}

double PosteriorBound(double epsilon) {
  return 1.0 / (1.0 + std::exp(-epsilon));
}

absl::StatusOr<std::vector<EpsilonEstimate>> MonteCarloEpsilonPerCoordinate(
    const RandomizedMap& mech, const LatentVector& v,
    const LatentVector& v_prime, const ClipBounds& bounds,
    const MonteCarloOptions& options, RandomSource& rng) {
  if (absl::Status s = ValidateMonteCarlo(v, v_prime, bounds, options);
      !s.ok()) {
    return s;
  }
  const size_t m = bounds.dim();
  std::vector<std::vector<int64_t>> counts[2];
  for (auto& c : counts) {
    c.assign(m, std::vector<int64_t>(options.bins, 0));
  }
  const LatentVector* inputs[2] = {&v, &v_prime};
  for (int side = 0; side < 2; ++side) {
    for (int64_t t = 0; t < options.trials; ++t) {
      absl::StatusOr<LatentVector> out = mech(*inputs[side], rng);
      if (!out.ok()) return out.status();
      if (out->dim() != m) {
        return absl::InvalidArgumentError(
            "mechanism output dimension differs from bounds");
      }
      for (size_t j = 0; j < m; ++j) {
        ++counts[side][j][BinOf((*out)[j], bounds.lower[j], bounds.upper[j],
                                options.bins)];
      }
    }
  }
  std::vector<EpsilonEstimate> estimates;
  estimates.reserve(m);
  for (size_t j = 0; j < m; ++j) {
    absl::StatusOr<EpsilonEstimate> e =
        EstimateFromCounts(counts[0][j], counts[1][j], options, j);
    if (!e.ok()) return e.status();
    estimates.push_back(*e);
  }
  return estimates;
}

absl::StatusOr<EpsilonEstimate> MonteCarloEpsilon(
    const RandomizedMap& mech, const LatentVector& v,
    const LatentVector& v_prime, const ClipBounds& bounds,
    const MonteCarloOptions& options, RandomSource& rng) {
  if (absl::Status s = ValidateMonteCarlo(v, v_prime, bounds, options);
      !s.ok()) {
    return s;
  }
  if (options.coordinate >= bounds.dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("coordinate ", options.coordinate, " out of range"));
  }
  const size_t j = options.coordinate;
  std::vector<int64_t> counts[2] = {std::vector<int64_t>(options.bins, 0),
                                    std::vector<int64_t>(options.bins, 0)};
  const LatentVector* inputs[2] = {&v, &v_prime};
  for (int side = 0; side < 2; ++side) {
    for (int64_t t = 0; t < options.trials; ++t) {
      absl::StatusOr<LatentVector> out = mech(*inputs[side], rng);
      if (!out.ok()) return out.status();
      if (out->dim() <= j) {
        return absl::InvalidArgumentError(
            "mechanism output lacks the audited coordinate");
      }
      ++counts[side][BinOf((*out)[j], bounds.lower[j], bounds.upper[j],
                           options.bins)];
    }
  }
  return EstimateFromCounts(counts[0], counts[1], options, j);
}

absl::StatusOr<SamplerReport> SamplerDistributionCheck(RandomSource& rng,
                                                       double lambda,
                                                       int64_t n) {
  if (n < 100000) {
    return absl::InvalidArgumentError("sampler check needs n >= 10^5");
  }
  if (!(lambda > 0.0)) {
    return absl::InvalidArgumentError("Laplace scale must be positive");
  }
  std::vector<double> samples(n);
  double sum = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    samples[i] = *LaplaceSample(rng, 0.0, lambda);
    sum += samples[i];
  }
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  double sq = 0.0;
  for (double x : samples) sq += (x - mean) * (x - mean);
  const double variance = sq / (dn - 1.0);

  std::sort(samples.begin(), samples.end());
  double ks = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const double f = LaplaceCdf(samples[i], 0.0, lambda);
    ks = std::max(ks, std::max(static_cast<double>(i + 1) / dn - f,
                               f - static_cast<double>(i) / dn));
  }
  return SamplerReport{.ks_statistic = ks,
                       .mean_error = std::abs(mean),
                       .var_error = std::abs(variance - 2.0 * lambda * lambda)};
}

absl::StatusOr<AuditReport> RunAudit(const ClipBounds& bounds,
                                     const AuditConfig& config,
                                     const LatentVector& v,
                                     const LatentVector& v_prime) {
  absl::StatusOr<SensitivityProfile> sensitivity = SensitivityFromBounds(bounds);
  if (!sensitivity.ok()) return sensitivity.status();
  absl::StatusOr<BudgetAllocation> allocation =
      config.weights.empty()
          ? BudgetAllocation::Uniform(config.epsilon, bounds.dim())
          : BudgetAllocation::Create(config.epsilon, config.weights);
  if (!allocation.ok()) return allocation.status();
  absl::StatusOr<NoisePlan> plan =
      config.paper_literal ? MakePaperLiteralNoisePlan(*sensitivity, *allocation)
                           : MakeNoisePlan(*sensitivity, *allocation);
  if (!plan.ok()) return plan.status();

  AuditReport report;
  report.configured_epsilon = config.epsilon;
  absl::StatusOr<double> analytic = AnalyticEpsilon(bounds, *plan);
  if (!analytic.ok()) return analytic.status();
  report.analytic_epsilon = *analytic;
  report.trials = config.trials;
  report.bins = config.bins;

  const PrivatizeOptions privatize_options{.post_clip = config.post_clip};
  RandomizedMap mech = [&](const LatentVector& x, RandomSource& rng) {
    return Privatize(x, bounds, *plan, rng, privatize_options);
  };
  MonteCarloOptions mc;
  mc.trials = config.trials;
  mc.bins = config.bins;
  RandomSource rng(config.seed);
  absl::StatusOr<std::vector<EpsilonEstimate>> estimates =
      MonteCarloEpsilonPerCoordinate(mech, v, v_prime, bounds, mc, rng);
  if (!estimates.ok()) return estimates.status();
  report.per_coordinate = *std::move(estimates);
  for (const EpsilonEstimate& e : report.per_coordinate) {
    report.epsilon_hat += e.epsilon_hat;
    report.margin += e.confidence_margin;
  }
  report.posterior_bound = PosteriorBound(report.analytic_epsilon);
  report.violation =
      report.analytic_epsilon > config.epsilon * (1.0 + 1e-12) + 1e-9 ||
      report.epsilon_hat - report.margin > config.epsilon;
  return report;
}

absl::StatusOr<AuditReport> RunAudit(const ClipBounds& bounds,
                                     const AuditConfig& config) {
  absl::StatusOr<LatentVector> lower = LatentVector::Create(bounds.lower);
  if (!lower.ok()) return lower.status();
  absl::StatusOr<LatentVector> upper = LatentVector::Create(bounds.upper);
  if (!upper.ok()) return upper.status();
  return RunAudit(bounds, config, *lower, *upper);
}

std::string AuditReportToJson(const AuditReport& report) {
  json per = json::array();
  for (const EpsilonEstimate& e : report.per_coordinate) {
    per.push_back({{"coordinate", e.coordinate},
                   {"epsilon_hat", e.epsilon_hat},
                   {"margin", e.confidence_margin}});
  }
  json doc = {{"configured_epsilon", report.configured_epsilon},
              {"analytic_epsilon", report.analytic_epsilon},
              {"epsilon_hat", report.epsilon_hat},
              {"margin", report.margin},
              {"trials", report.trials},
              {"bins", report.bins},
              {"posterior_bound", report.posterior_bound},
              {"verdict", report.violation ? "violation" : "pass"},
              {"per_coordinate", per}};
  return doc.dump(2) + "\n";
}

}  // namespace latent_ldp
