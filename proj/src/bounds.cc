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

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

namespace latent_ldp {

using json = nlohmann::json;

double SensitivityProfile::Max() const {
  return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
}

absl::Status ValidateBounds(const ClipBounds& bounds) {
  if (bounds.lower.empty() || bounds.lower.size() != bounds.upper.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("bounds need matching nonempty lower/upper, got ",
                     bounds.lower.size(), " and ", bounds.upper.size()));
  }
  if (!(0.0 <= bounds.p_low && bounds.p_low <= bounds.p_high &&
        bounds.p_high <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "quantile levels must satisfy 0 <= p_low <= p_high <= 1, got ",
        bounds.p_low, ", ", bounds.p_high));
  }
  for (size_t j = 0; j < bounds.dim(); ++j) {
    if (!std::isfinite(bounds.lower[j]) || !std::isfinite(bounds.upper[j]) ||
        bounds.lower[j] > bounds.upper[j]) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid bounds for component ", j, ": [",
                       bounds.lower[j], ", ", bounds.upper[j], "]"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<SensitivityProfile> ComputeRawSensitivity(
    const LatentMatrix& data) {
  SensitivityProfile profile;
  profile.s.resize(data.cols());
  for (size_t j = 0; j < data.cols(); ++j) {
    double lo = data.at(0, j);
    double hi = lo;
    for (size_t i = 1; i < data.rows(); ++i) {
      lo = std::min(lo, data.at(i, j));
      hi = std::max(hi, data.at(i, j));
    }
    profile.s[j] = hi - lo;
  }
  return profile;
}

absl::StatusOr<double> Quantile(std::vector<double> sample, double p) {
  if (sample.empty()) return absl::InvalidArgumentError("empty sample");
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("quantile level out of [0,1]: ", p));
  }
  std::sort(sample.begin(), sample.end());
  const double h = p * static_cast<double>(sample.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = static_cast<size_t>(std::ceil(h));
  return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

absl::StatusOr<ClipBounds> ComputeClipBounds(const LatentMatrix& data,
                                             double p_low, double p_high) {
  if (!(0.0 <= p_low && p_low <= p_high && p_high <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "quantile levels must satisfy 0 <= p_low <= p_high <= 1, got ", p_low,
        ", ", p_high));
  }
  ClipBounds bounds;
  bounds.p_low = p_low;
  bounds.p_high = p_high;
  bounds.lower.resize(data.cols());
  bounds.upper.resize(data.cols());
  for (size_t j = 0; j < data.cols(); ++j) {
    std::vector<double> column = data.Column(j);
    bounds.lower[j] = *Quantile(column, p_low);
    bounds.upper[j] = *Quantile(std::move(column), p_high);
  }
  return bounds;
}

absl::StatusOr<LatentVector> Clip(const LatentVector& v,
                                  const ClipBounds& bounds) {
  if (absl::Status s = CheckSameDim(bounds.dim(), v.dim(), "clip input");
      !s.ok()) {
    return s;
  }
  std::vector<double> out(v.dim());
  for (size_t j = 0; j < v.dim(); ++j) {
    out[j] = std::min(bounds.upper[j], std::max(bounds.lower[j], v[j]));
  }
  return LatentVector::Create(std::move(out));
}

absl::StatusOr<SensitivityProfile> SensitivityFromBounds(
    const ClipBounds& bounds) {
  if (absl::Status s = ValidateBounds(bounds); !s.ok()) return s;
  SensitivityProfile profile;
  profile.s.resize(bounds.dim());
  for (size_t j = 0; j < bounds.dim(); ++j) {
    profile.s[j] = bounds.upper[j] - bounds.lower[j];
  }
  return profile;
}

std::string BoundsToJson(const ClipBounds& bounds) {
  std::vector<double> s(bounds.dim());
  for (size_t j = 0; j < bounds.dim(); ++j) {
    s[j] = bounds.upper[j] - bounds.lower[j];
  }
  json doc = {{"p_low", bounds.p_low},
              {"p_high", bounds.p_high},
              {"lower", bounds.lower},
              {"upper", bounds.upper},
              {"sensitivity", s}};
  return doc.dump(2) + "\n";
}

absl::StatusOr<ClipBounds> BoundsFromJson(absl::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("bounds file is not a JSON object");
  }
  ClipBounds bounds;
  try {
    bounds.p_low = doc.at("p_low").get<double>();
    bounds.p_high = doc.at("p_high").get<double>();
    bounds.lower = doc.at("lower").get<std::vector<double>>();
    bounds.upper = doc.at("upper").get<std::vector<double>>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed bounds JSON: ", e.what()));
  }
  if (absl::Status s = ValidateBounds(bounds); !s.ok()) return s;
  return bounds;
}

absl::StatusOr<ClipBounds> ReadBoundsFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFileToString(path);
  if (!text.ok()) return text.status();
  return BoundsFromJson(*text);
}

absl::Status WriteBoundsFile(const std::string& path,
                             const ClipBounds& bounds) {
  return WriteStringToFile(path, BoundsToJson(bounds));
}

}  // namespace latent_ldp
