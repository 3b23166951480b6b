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

#ifndef LATENT_LDP_METRICS_H_
#define LATENT_LDP_METRICS_H_

#include <limits>
#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "latent_ldp/codec.h"
#include "latent_ldp/latent.h"

namespace latent_ldp {

// Returned by Psnr for identical images.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

inline constexpr size_t kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

// 10 log10(1 / MSE) for pixels in [0, 1]; kInfinitePsnr when MSE is zero.
absl::StatusOr<double> Psnr(const Image& a, const Image& b);

// Mean structural similarity over every fully contained 11x11 Gaussian
// window (sigma 1.5), with C1 = (0.01 L)^2, C2 = (0.03 L)^2 and L = 1.
absl::StatusOr<double> Ssim(const Image& a, const Image& b);

struct LatentDistance {
  double l1 = 0.0;
  double linf = 0.0;
};

absl::StatusOr<LatentDistance> ComputeLatentDistance(const LatentVector& z,
                                                     const LatentVector& z2);

struct MetricReport {
  double psnr = kInfinitePsnr;
  double ssim = 1.0;
  // Present when both images were also compared in latent space.
  std::optional<LatentDistance> latent;
};

absl::StatusOr<MetricReport> CompareImages(const Image& a, const Image& b);

// Single-line JSON; an infinite PSNR is written as the string "inf".
std::string MetricReportToJson(const MetricReport& report);

}  // namespace latent_ldp

#endif  // LATENT_LDP_METRICS_H_
