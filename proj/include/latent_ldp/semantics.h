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

#ifndef LATENT_LDP_SEMANTICS_H_
#define LATENT_LDP_SEMANTICS_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "latent_ldp/latent.h"

namespace latent_ldp {

// Hyperplane through the origin separating a binary attribute; `normal` has
// unit L2 norm and points toward the positive class.
struct SemanticBoundary {
  std::vector<double> normal;

  size_t dim() const { return normal.size(); }
};

// Normalized difference of class centroids (positive minus negative).
absl::StatusOr<SemanticBoundary> FitBoundary(const LatentMatrix& latents,
                                             const std::vector<int>& labels);

// Signed distance n^T z. Negative on the negative side.
absl::StatusOr<double> SignedDistance(const SemanticBoundary& boundary,
                                      const LatentVector& z);

// z + alpha n.
absl::StatusOr<LatentVector> EditLatent(const LatentVector& z,
                                        const SemanticBoundary& boundary,
                                        double alpha);

std::string BoundaryToJson(const SemanticBoundary& boundary);
absl::StatusOr<SemanticBoundary> BoundaryFromJson(absl::string_view text);

// One 0/1 label per line (or comma-separated).
absl::StatusOr<std::vector<int>> ParseLabels(absl::string_view text);

}  // namespace latent_ldp

#endif  // LATENT_LDP_SEMANTICS_H_
