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

#include "latent_ldp/pipeline.h"

#include <cmath>
#include <cstdio>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "latent_ldp/metrics.h"
#include "latent_ldp/random.h"

namespace latent_ldp {
namespace {

using json = nlohmann::json;

template <typename T>
absl::Status Read(const json& doc, const char* key, T& out) {
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config key '", key, "': ", e.what()));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<PipelineConfig> ApplyConfigJson(absl::string_view text,
                                               PipelineConfig base) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("config is not a JSON object");
  }
  PipelineConfig c = std::move(base);
  for (const auto& [key, value] : doc.items()) {
    absl::Status s;
    if (key == "epsilon") {
      s = Read(doc, "epsilon", c.epsilon);
    } else if (key == "weights") {
      if (value.is_string()) {
        if (value.get<std::string>() != "uniform") {
          s = absl::InvalidArgumentError(
              "config 'weights' must be \"uniform\" or an array");
        }
        c.weights.reset();
      } else {
        std::vector<double> w;
        s = Read(doc, "weights", w);
        c.weights = std::move(w);
      }
    } else if (key == "p_low") {
      s = Read(doc, "p_low", c.p_low);
    } else if (key == "p_high") {
      s = Read(doc, "p_high", c.p_high);
    } else if (key == "seed") {
      s = Read(doc, "seed", c.seed);
    } else if (key == "width") {
      s = Read(doc, "width", c.width);
    } else if (key == "height") {
      s = Read(doc, "height", c.height);
    } else if (key == "d") {
      s = Read(doc, "d", c.d);
    } else if (key == "count") {
      s = Read(doc, "count", c.count);
    } else if (key == "trials") {
      s = Read(doc, "trials", c.trials);
    } else if (key == "bins") {
      s = Read(doc, "bins", c.bins);
    } else if (key == "repetitions") {
      s = Read(doc, "repetitions", c.repetitions);
    } else if (key == "epsilons") {
      s = Read(doc, "epsilons", c.epsilons);
    } else if (key == "clip_settings") {
      s = Read(doc, "clip_settings", c.clip_settings);
    } else if (key == "alpha") {
      s = Read(doc, "alpha", c.alpha);
    } else if (key == "post_clip") {
      s = Read(doc, "post_clip", c.post_clip);
    } else if (key == "paper_literal") {
      s = Read(doc, "paper_literal", c.paper_literal);
    } else if (key == "bounds") {
      s = Read(doc, "bounds", c.bounds);
    } else if (key == "codec") {
      s = Read(doc, "codec", c.codec);
    } else if (key == "out") {
      s = Read(doc, "out", c.out);
    } else {
      s = absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
    if (!s.ok()) return s;
  }
  return c;
}

absl::StatusOr<BudgetAllocation> MakeAllocation(const PipelineConfig& config,
                                                size_t dim) {
  if (!config.weights.has_value()) {
    return BudgetAllocation::Uniform(config.epsilon, dim);
  }
  if (absl::Status s = CheckSameDim(dim, config.weights->size(), "weights");
      !s.ok()) {
    return s;
  }
  return BudgetAllocation::Create(config.epsilon, *config.weights);
}

std::vector<double> DefaultEpsilonGrid(size_t latent_dim) {
  std::vector<double> grid;
  for (int k = -2; k <= 6; ++k) {
    grid.push_back(static_cast<double>(latent_dim) * std::ldexp(1.0, k));
  }
  return grid;
}

absl::StatusOr<std::vector<Image>> PrivatizeImages(
    const std::vector<Image>& images, const CodecModel& codec,
    const ClipBounds& bounds, const NoisePlan& plan, uint64_t seed,
    const PrivatizeOptions& options) {
  std::vector<Image> out;
  out.reserve(images.size());
  for (size_t i = 0; i < images.size(); ++i) {
    absl::StatusOr<LatentVector> z = Encode(codec, images[i]);
    if (!z.ok()) return z.status();
    RandomSource rng(seed, i);
    absl::StatusOr<LatentVector> noisy =
        Privatize(*z, bounds, plan, rng, options);
    if (!noisy.ok()) return noisy.status();
    absl::StatusOr<Image> decoded = Decode(codec, *noisy);
    if (!decoded.ok()) return decoded.status();
    out.push_back(*std::move(decoded));
  }
  return out;
}

std::string BoundsHash(const ClipBounds& bounds) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : BoundsToJson(bounds)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string BudgetStampJson(const NoisePlan& plan, const ClipBounds& bounds,
                            uint64_t seed) {
  double charged = 0.0;
  for (double e : plan.per_component_epsilon) charged += e;
  json doc = {{"epsilon", plan.epsilon},
              {"epsilon_charged", charged},
              {"weights", plan.weights},
              {"p_low", bounds.p_low},
              {"p_high", bounds.p_high},
              {"bounds_hash", BoundsHash(bounds)},
              {"seed", seed}};
  return doc.dump(2) + "\n";
}

absl::StatusOr<std::vector<SweepPoint>> RunSweep(
    const std::vector<Image>& images, const CodecModel& codec,
    const SweepConfig& config) {
  if (config.epsilons.empty()) {
    return absl::InvalidArgumentError("epsilon grid is empty");
  }
  if (config.repetitions < 1) {
    return absl::InvalidArgumentError("repetitions must be >= 1");
  }
  if (images.empty()) return absl::InvalidArgumentError("no images");
  absl::StatusOr<LatentMatrix> latents = EncodeAll(codec, images);
  if (!latents.ok()) return latents.status();

  const size_t n = images.size();
  std::vector<SweepPoint> points;
  for (const auto& [p_low, p_high] : config.clip_settings) {
    absl::StatusOr<ClipBounds> bounds =
        ComputeClipBounds(*latents, p_low, p_high);
    if (!bounds.ok()) return bounds.status();
    absl::StatusOr<SensitivityProfile> sensitivity =
        SensitivityFromBounds(*bounds);
    if (!sensitivity.ok()) return sensitivity.status();
    for (double epsilon : config.epsilons) {
      PipelineConfig alloc_config;
      alloc_config.epsilon = epsilon;
      alloc_config.weights = config.weights;
      absl::StatusOr<BudgetAllocation> allocation =
          MakeAllocation(alloc_config, codec.latent_dim());
      if (!allocation.ok()) return allocation.status();
      absl::StatusOr<NoisePlan> plan = MakeNoisePlan(*sensitivity, *allocation);
      if (!plan.ok()) return plan.status();

      double ssim_sum = 0.0;
      double psnr_sum = 0.0;
      double l1_sum = 0.0;
      for (int r = 0; r < config.repetitions; ++r) {
        for (size_t i = 0; i < n; ++i) {
          const LatentVector z = latents->RowVector(i);
          RandomSource rng(config.seed, static_cast<uint64_t>(r) * n + i);
          absl::StatusOr<LatentVector> noisy =
              Privatize(z, *bounds, *plan, rng);
          if (!noisy.ok()) return noisy.status();
          absl::StatusOr<Image> decoded = Decode(codec, *noisy);
          if (!decoded.ok()) return decoded.status();
          absl::StatusOr<MetricReport> report =
              CompareImages(images[i], *decoded);
          if (!report.ok()) return report.status();
          ssim_sum += report->ssim;
          psnr_sum += report->psnr;
          l1_sum += ComputeLatentDistance(z, *noisy)->l1;
        }
      }
      const double total = static_cast<double>(n) * config.repetitions;
      points.push_back(SweepPoint{.p_low = p_low,
                                  .p_high = p_high,
                                  .epsilon = epsilon,
                                  .mean_ssim = ssim_sum / total,
                                  .mean_psnr = psnr_sum / total,
                                  .mean_latent_l1 = l1_sum / total});
    }
  }
  return points;
}

std::string SweepToCsv(const std::vector<SweepPoint>& points) {
  std::string out = "p_low,p_high,epsilon,mean_ssim,mean_psnr,mean_latent_l1\n";
  for (const SweepPoint& p : points) {
    absl::StrAppend(&out, FormatDouble(p.p_low), ",", FormatDouble(p.p_high),
                    ",", FormatDouble(p.epsilon), ",", FormatDouble(p.mean_ssim),
                    ",", FormatDouble(p.mean_psnr), ",",
                    FormatDouble(p.mean_latent_l1), "\n");
  }
  return out;
}

}  // namespace latent_ldp
