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

#ifndef LATENT_LDP_BOUNDS_H_
#define LATENT_LDP_BOUNDS_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "latent_ldp/latent.h"

namespace latent_ldp {

// Per-component admissible box [lower_j, upper_j]. p_low and p_high record
// the quantile levels the box was derived from.
struct ClipBounds {
  std::vector<double> lower;
  std::vector<double> upper;
  double p_low = 0.0;
  double p_high = 1.0;

  size_t dim() const { return lower.size(); }
};

// Per-component LDP sensitivity.
struct SensitivityProfile {
  std::vector<double> s;

  size_t dim() const { return s.size(); }
  // Scalar summary max_j s_j, for reporting.
  double Max() const;
};

absl::Status ValidateBounds(const ClipBounds& bounds);

// Observed range max_i z_ij - min_i z_ij of every column.
absl::StatusOr<SensitivityProfile> ComputeRawSensitivity(
    const LatentMatrix& data);

// Quantile of an unsorted sample with linear interpolation between order
// statistics: h = p (n - 1), x[floor h] + (h - floor h)(x[ceil h] - x[floor h]).
absl::StatusOr<double> Quantile(std::vector<double> sample, double p);

absl::StatusOr<ClipBounds> ComputeClipBounds(const LatentMatrix& data,
                                             double p_low, double p_high);

// Projects v onto the box. Idempotent and monotone in every component.
absl::StatusOr<LatentVector> Clip(const LatentVector& v,
                                  const ClipBounds& bounds);

// Sensitivity after clipping: s_j = upper_j - lower_j.
absl::StatusOr<SensitivityProfile> SensitivityFromBounds(
    const ClipBounds& bounds);

// {"p_low", "p_high", "lower", "upper", "sensitivity"}.
std::string BoundsToJson(const ClipBounds& bounds);
absl::StatusOr<ClipBounds> BoundsFromJson(absl::string_view json);

absl::StatusOr<ClipBounds> ReadBoundsFile(const std::string& path);
absl::Status WriteBoundsFile(const std::string& path, const ClipBounds& bounds);

}  // namespace latent_ldp

#endif  // LATENT_LDP_BOUNDS_H_
