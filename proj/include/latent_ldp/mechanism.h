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

#ifndef LATENT_LDP_MECHANISM_H_
#define LATENT_LDP_MECHANISM_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "latent_ldp/bounds.h"
#include "latent_ldp/latent.h"
#include "latent_ldp/random.h"

namespace latent_ldp {

// Total budget epsilon split over components by positive weights summing
// to one.
class BudgetAllocation {
 public:
  // Weights whose sum is within 1e-9 of one are renormalized; anything
  // further off is rejected.
  static absl::StatusOr<BudgetAllocation> Create(double epsilon,
                                                 std::vector<double> weights);
  static absl::StatusOr<BudgetAllocation> Uniform(double epsilon, size_t dim);

  double epsilon() const { return epsilon_; }
  const std::vector<double>& weights() const { return weights_; }
  size_t dim() const { return weights_.size(); }
  // epsilon * w_j.
  double ComponentEpsilon(size_t j) const { return epsilon_ * weights_[j]; }

 private:
  BudgetAllocation(double epsilon, std::vector<double> weights)
      : epsilon_(epsilon), weights_(std::move(weights)) {}

  double epsilon_;
  std::vector<double> weights_;
};

// Laplace scale and budget charged for every component.
struct NoisePlan {
  double epsilon = 0.0;
  std::vector<double> weights;
  std::vector<double> scales;
  std::vector<double> per_component_epsilon;

  size_t dim() const { return scales.size(); }
};

// lambda_j = s_j / (epsilon w_j), or 0 when s_j = 0. Every component is
// charged epsilon w_j regardless of its sensitivity.
absl::StatusOr<NoisePlan> MakeNoisePlan(const SensitivityProfile& sensitivity,
                                        const BudgetAllocation& allocation);

// Draw from Lap(mu, lambda) by inverting the CDF.
absl::StatusOr<double> LaplaceSample(RandomSource& rng, double mu,
                                     double lambda);

// Lap(0, 1) draw; consumes exactly one uniform.
double StandardLaplace(RandomSource& rng);

// ln f(x | mu, lambda) = -ln(2 lambda) - |x - mu| / lambda.
absl::StatusOr<double> LaplaceLogDensity(double x, double mu, double lambda);

// P(X <= x) for X ~ Lap(mu, lambda).
double LaplaceCdf(double x, double mu, double lambda);

struct PrivatizeOptions {
  // Clip the noisy vector back into the box. Pure postprocessing.
  bool post_clip = true;
};

// clip(clip(v) + delta) with delta_j ~ Lap(0, lambda_j) independent.
// One uniform is consumed per component, including zero-scale ones, so the
// random stream lines up across plans of the same dimension.
absl::StatusOr<LatentVector> Privatize(const LatentVector& v,
                                       const ClipBounds& bounds,
                                       const NoisePlan& plan, RandomSource& rng,
                                       const PrivatizeOptions& options = {});

// Row i draws from RandomSource(seed, i).
absl::StatusOr<LatentMatrix> PrivatizeBatch(
    const LatentMatrix& data, const ClipBounds& bounds, const NoisePlan& plan,
    uint64_t seed, const PrivatizeOptions& options = {});

// Running total of budget spent on one individual's data. Releases compose
// sequentially, so the charges add.
class PrivacyAccountant {
 public:
  void Charge(double epsilon) { charges_.push_back(epsilon); }
  void Charge(const NoisePlan& plan);

  double Spent() const;
  size_t releases() const { return charges_.size(); }

 private:
  std::vector<double> charges_;
};

std::string NoisePlanToJson(const NoisePlan& plan);
absl::StatusOr<NoisePlan> NoisePlanFromJson(absl::string_view text);

}  // namespace latent_ldp

#endif  // LATENT_LDP_MECHANISM_H_
