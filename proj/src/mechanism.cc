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

#include "latent_ldp/mechanism.h"

#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

namespace latent_ldp {
namespace {

// Neumaier summation keeps large uniform splits exact to a few ulps.
double CompensatedSum(const std::vector<double>& values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

}  // namespace

using json = nlohmann::json;

absl::StatusOr<BudgetAllocation> BudgetAllocation::Create(
    double epsilon, std::vector<double> weights) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ", epsilon));
  }
  if (weights.empty()) return absl::InvalidArgumentError("no weights");
  for (size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j])) {
      return absl::InvalidArgumentError(
          absl::StrCat("weight ", j, " must be positive, got ", weights[j]));
    }
  }
  const double sum = CompensatedSum(weights);
  if (std::abs(sum - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("weights sum to ", sum, ", expected 1"));
  }
  for (double& w : weights) w /= sum;
  return BudgetAllocation(epsilon, std::move(weights));
}

absl::StatusOr<BudgetAllocation> BudgetAllocation::Uniform(double epsilon,
                                                           size_t dim) {
  if (dim == 0) return absl::InvalidArgumentError("dimension must be >= 1");
  return Create(epsilon, std::vector<double>(dim, 1.0 / dim));
}

absl::StatusOr<NoisePlan> MakeNoisePlan(const SensitivityProfile& sensitivity,
                                        const BudgetAllocation& allocation) {
  if (absl::Status s = CheckSameDim(allocation.dim(), sensitivity.dim(),
                                    "sensitivity profile");
      !s.ok()) {
    return s;
  }
  NoisePlan plan;
  plan.epsilon = allocation.epsilon();
  plan.weights = allocation.weights();
  plan.scales.resize(allocation.dim());
  plan.per_component_epsilon.resize(allocation.dim());
  for (size_t j = 0; j < allocation.dim(); ++j) {
    const double s = sensitivity.s[j];
    if (!(s >= 0.0) || !std::isfinite(s)) {
      return absl::InvalidArgumentError(
          absl::StrCat("sensitivity ", j, " must be finite and >= 0"));
    }
    const double eps_j = allocation.ComponentEpsilon(j);
    plan.per_component_epsilon[j] = eps_j;
    plan.scales[j] = s > 0.0 ? s / eps_j : 0.0;
  }
  return plan;
}

double StandardLaplace(RandomSource& rng) {
  const double u = rng.Uniform() - 0.5;
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -sign * std::log1p(-2.0 * std::abs(u));
}

absl::StatusOr<double> LaplaceSample(RandomSource& rng, double mu,
                                     double lambda) {
  if (!(lambda > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be positive, got ", lambda));
  }
  return mu + lambda * StandardLaplace(rng);
}

absl::StatusOr<double> LaplaceLogDensity(double x, double mu, double lambda) {
  if (!(lambda > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be positive, got ", lambda));
  }
  return -std::log(2.0 * lambda) - std::abs(x - mu) / lambda;
}

double LaplaceCdf(double x, double mu, double lambda) {
  const double t = (x - mu) / lambda;
  return t < 0.0 ? 0.5 * std::exp(t) : 1.0 - 0.5 * std::exp(-t);
}

absl::StatusOr<LatentVector> Privatize(const LatentVector& v,
                                       const ClipBounds& bounds,
                                       const NoisePlan& plan, RandomSource& rng,
                                       const PrivatizeOptions& options) {
  if (absl::Status s = CheckSameDim(bounds.dim(), v.dim(), "privatize input");
      !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckSameDim(bounds.dim(), plan.dim(), "noise plan");
      !s.ok()) {
    return s;
  }
  std::vector<double> out(v.dim());
  for (size_t j = 0; j < v.dim(); ++j) {
    const double lo = bounds.lower[j];
    const double hi = bounds.upper[j];
    const double clipped = std::min(hi, std::max(lo, v[j]));
    const double noisy = clipped + plan.scales[j] * StandardLaplace(rng);
    out[j] = options.post_clip ? std::min(hi, std::max(lo, noisy)) : noisy;
  }
  return LatentVector::Create(std::move(out));
}

absl::StatusOr<LatentMatrix> PrivatizeBatch(const LatentMatrix& data,
                                            const ClipBounds& bounds,
                                            const NoisePlan& plan,
                                            uint64_t seed,
                                            const PrivatizeOptions& options) {
  std::vector<LatentVector> rows;
  rows.reserve(data.rows());
  for (size_t i = 0; i < data.rows(); ++i) {
    RandomSource rng(seed, i);
    absl::StatusOr<LatentVector> row =
        Privatize(data.RowVector(i), bounds, plan, rng, options);
    if (!row.ok()) return row.status();
    rows.push_back(*std::move(row));
  }
  return LatentMatrix::FromVectors(rows);
}

void PrivacyAccountant::Charge(const NoisePlan& plan) {
  Charge(std::accumulate(plan.per_component_epsilon.begin(),
                         plan.per_component_epsilon.end(), 0.0));
}

double PrivacyAccountant::Spent() const {
  return std::accumulate(charges_.begin(), charges_.end(), 0.0);
}

std::string NoisePlanToJson(const NoisePlan& plan) {
  json doc = {{"epsilon", plan.epsilon},
              {"weights", plan.weights},
              {"scales", plan.scales},
              {"per_component_epsilon", plan.per_component_epsilon}};
  return doc.dump(2) + "\n";
}

absl::StatusOr<NoisePlan> NoisePlanFromJson(absl::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("noise plan is not a JSON object");
  }
  NoisePlan plan;
  try {
    plan.epsilon = doc.at("epsilon").get<double>();
    plan.weights = doc.at("weights").get<std::vector<double>>();
    plan.scales = doc.at("scales").get<std::vector<double>>();
    plan.per_component_epsilon =
        doc.at("per_component_epsilon").get<std::vector<double>>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed noise plan JSON: ", e.what()));
  }
  if (plan.scales.size() != plan.weights.size() ||
      plan.scales.size() != plan.per_component_epsilon.size()) {
    return absl::InvalidArgumentError("noise plan arrays differ in length");
  }
  return plan;
}

}  // namespace latent_ldp
