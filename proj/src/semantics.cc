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

#include "latent_ldp/semantics.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "json.hpp"

namespace latent_ldp {

using json = nlohmann::json;

absl::StatusOr<SemanticBoundary> FitBoundary(const LatentMatrix& latents,
                                             const std::vector<int>& labels) {
  if (labels.size() != latents.rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("got ", labels.size(), " labels for ", latents.rows(),
                     " latent rows"));
  }
  const size_t m = latents.cols();
  std::vector<double> sum[2] = {std::vector<double>(m, 0.0),
                                std::vector<double>(m, 0.0)};
  size_t count[2] = {0, 0};
  for (size_t i = 0; i < latents.rows(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("label ", i, " is ", labels[i], ", expected 0 or 1"));
    }
    auto row = latents.row(i);
    for (size_t j = 0; j < m; ++j) sum[labels[i]][j] += row[j];
    ++count[labels[i]];
  }
  if (count[0] == 0 || count[1] == 0) {
    return absl::InvalidArgumentError("boundary fit needs both classes");
  }
  SemanticBoundary boundary;
  boundary.normal.resize(m);
  double norm2 = 0.0;
  for (size_t j = 0; j < m; ++j) {
    const double d = sum[1][j] / static_cast<double>(count[1]) -
                     sum[0][j] / static_cast<double>(count[0]);
    boundary.normal[j] = d;
    norm2 += d * d;
  }
  const double norm = std::sqrt(norm2);
  if (!(norm > 0.0)) {
    return absl::InvalidArgumentError("class centroids coincide");
  }
  for (double& v : boundary.normal) v /= norm;
  return boundary;
}

absl::StatusOr<double> SignedDistance(const SemanticBoundary& boundary,
                                      const LatentVector& z) {
  if (absl::Status s = CheckSameDim(boundary.dim(), z.dim(), "boundary");
      !s.ok()) {
    return s;
  }
  double acc = 0.0;
  for (size_t j = 0; j < z.dim(); ++j) acc += boundary.normal[j] * z[j];
  return acc;
}

absl::StatusOr<LatentVector> EditLatent(const LatentVector& z,
                                        const SemanticBoundary& boundary,
                                        double alpha) {
  if (absl::Status s = CheckSameDim(boundary.dim(), z.dim(), "boundary");
      !s.ok()) {
    return s;
  }
  std::vector<double> out(z.dim());
  for (size_t j = 0; j < z.dim(); ++j) {
    out[j] = z[j] + alpha * boundary.normal[j];
  }
  return LatentVector::Create(std::move(out));
}

std::string BoundaryToJson(const SemanticBoundary& boundary) {
  return json{{"n", boundary.normal}}.dump(2) + "\n";
}

absl::StatusOr<SemanticBoundary> BoundaryFromJson(absl::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("boundary is not a JSON object");
  }
  SemanticBoundary boundary;
  try {
    boundary.normal = doc.at("n").get<std::vector<double>>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed boundary JSON: ", e.what()));
  }
  double norm2 = 0.0;
  for (double v : boundary.normal) norm2 += v * v;
  if (boundary.normal.empty() || std::abs(std::sqrt(norm2) - 1.0) > 1e-10) {
    return absl::InvalidArgumentError("boundary normal must have unit norm");
  }
  return boundary;
}

absl::StatusOr<std::vector<int>> ParseLabels(absl::string_view text) {
  std::vector<int> labels;
  for (absl::string_view cell : absl::StrSplit(text, absl::ByAnyChar(",\n"))) {
    cell = absl::StripAsciiWhitespace(cell);
    if (cell.empty()) continue;
    if (cell == "0") {
      labels.push_back(0);
    } else if (cell == "1") {
      labels.push_back(1);
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("label '", cell, "' is not 0 or 1"));
    }
  }
  return labels;
}

}  // namespace latent_ldp
