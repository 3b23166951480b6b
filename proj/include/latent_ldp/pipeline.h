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

#ifndef LATENT_LDP_PIPELINE_H_
#define LATENT_LDP_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "latent_ldp/bounds.h"
#include "latent_ldp/codec.h"
#include "latent_ldp/latent.h"
#include "latent_ldp/mechanism.h"

namespace latent_ldp {

// Settings shared by the command-line tools. Values come from defaults, then
// an optional JSON config file, then explicit flags.
struct PipelineConfig {
  double epsilon = 1.0;
  // Unset means uniform weights.
  std::optional<std::vector<double>> weights;
  double p_low = 0.0;
  double p_high = 1.0;
  uint64_t seed = 0;
  size_t width = 32;
  size_t height = 32;
  size_t d = 16;
  size_t count = 200;
  int64_t trials = 100000;
  int bins = 20;
  int repetitions = 50;
  // Sweep grid; empty means d * 2^k for k = -2..6.
  std::vector<double> epsilons;
  // Sweep clipping settings; empty means the single (p_low, p_high).
  std::vector<std::pair<double, double>> clip_settings;
  double alpha = 0.0;
  bool post_clip = true;
  bool paper_literal = false;
  std::string bounds;
  std::string codec;
  std::string out;
};

// Applies a JSON object on top of `base`. Unknown keys are rejected.
absl::StatusOr<PipelineConfig> ApplyConfigJson(absl::string_view text,
                                               PipelineConfig base);

absl::StatusOr<BudgetAllocation> MakeAllocation(const PipelineConfig& config,
                                                size_t dim);

std::vector<double> DefaultEpsilonGrid(size_t latent_dim);

// encode -> privatize -> decode for every image; image i draws from
// RandomSource(seed, i).
absl::StatusOr<std::vector<Image>> PrivatizeImages(
    const std::vector<Image>& images, const CodecModel& codec,
    const ClipBounds& bounds, const NoisePlan& plan, uint64_t seed,
    const PrivatizeOptions& options = {});

// Record of the budget spent by one privatized release.
std::string BudgetStampJson(const NoisePlan& plan, const ClipBounds& bounds,
                            uint64_t seed);

// FNV-1a 64 of the canonical bounds JSON, as 16 hex digits.
std::string BoundsHash(const ClipBounds& bounds);

struct SweepConfig {
  std::vector<double> epsilons;
  int repetitions = 1;
  std::vector<std::pair<double, double>> clip_settings = {{0.0, 1.0}};
  // Unset means uniform.
  std::optional<std::vector<double>> weights;
  uint64_t seed = 0;
};

struct SweepPoint {
  double p_low = 0.0;
  double p_high = 1.0;
  double epsilon = 0.0;
  double mean_ssim = 0.0;
  double mean_psnr = 0.0;
  double mean_latent_l1 = 0.0;
};

// For every clipping setting and epsilon, privatizes each image
// `repetitions` times and averages SSIM/PSNR against the originals and the
// L1 distance to the original latent. Draw (rep r, image i) uses
// RandomSource(seed, r * n + i) for every setting and epsilon, so the curves
// share their noise draws.
absl::StatusOr<std::vector<SweepPoint>> RunSweep(
    const std::vector<Image>& images, const CodecModel& codec,
    const SweepConfig& config);

// p_low,p_high,epsilon,mean_ssim,mean_psnr,mean_latent_l1
std::string SweepToCsv(const std::vector<SweepPoint>& points);

}  // namespace latent_ldp

#endif  // LATENT_LDP_PIPELINE_H_
