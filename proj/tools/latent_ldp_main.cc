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

// Command-line front end: fit bounds and codecs, privatize latents or
// images, measure fidelity, audit the mechanism and edit along semantic
// boundaries.
//
// Exit codes: 0 success, 1 runtime or data error, 2 usage or config error,
// 3 audit found a violation.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "latent_ldp/audit.h"
#include "latent_ldp/bounds.h"
#include "latent_ldp/codec.h"
#include "latent_ldp/latent.h"
#include "latent_ldp/mechanism.h"
#include "latent_ldp/metrics.h"
#include "latent_ldp/pipeline.h"
#include "latent_ldp/semantics.h"

namespace latent_ldp {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitViolation = 3;

// Distinguishes configuration mistakes (exit 2) from data errors (exit 1).
struct UsageError {
  std::string message;
};

#define RETURN_IF_ERROR(expr)                  \
  do {                                         \
    if (absl::Status _s = (expr); !_s.ok()) {  \
      return _s;                               \
    }                                          \
  } while (0)

#define ASSIGN_OR_RETURN(lhs, expr)            \
  auto lhs##_or = (expr);                      \
  if (!lhs##_or.ok()) return lhs##_or.status(); \
  auto lhs = *std::move(lhs##_or)

absl::StatusOr<std::vector<double>> ParseDoubleList(absl::string_view text) {
  std::vector<double> out;
  for (absl::string_view cell : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    double v = 0;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(cell), &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a number: '", cell, "'"));
    }
    out.push_back(v);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty list");
  return out;
}

// "0:1,0.1:0.9" -> {(0, 1), (0.1, 0.9)}.
absl::StatusOr<std::vector<std::pair<double, double>>> ParseClipList(
    absl::string_view text) {
  std::vector<std::pair<double, double>> out;
  for (absl::string_view item : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    std::vector<absl::string_view> parts = absl::StrSplit(item, ':');
    double lo = 0, hi = 0;
    if (parts.size() != 2 ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(parts[0]), &lo) ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(parts[1]), &hi)) {
      return absl::InvalidArgumentError(
          absl::StrCat("clip setting '", item, "' is not low:high"));
    }
    out.emplace_back(lo, hi);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty clip list");
  return out;
}

bool IsLatentPath(const std::string& path) {
  const std::string ext = fs::path(path).extension().string();
  return ext == ".bin" || ext == ".csv" || ext == ".lat";
}

// Expands directories to their *.pgm files in name order.
absl::StatusOr<std::vector<std::string>> ExpandImagePaths(
    const std::vector<std::string>& inputs) {
  std::vector<std::string> paths;
  for (const std::string& input : inputs) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(input, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
          found.push_back(entry.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      paths.insert(paths.end(), found.begin(), found.end());
    } else {
      paths.push_back(input);
    }
  }
  if (paths.empty()) return absl::InvalidArgumentError("no input images");
  return paths;
}

absl::StatusOr<std::vector<Image>> LoadImages(
    const std::vector<std::string>& inputs) {
  ASSIGN_OR_RETURN(paths, ExpandImagePaths(inputs));
  std::vector<Image> images;
  images.reserve(paths.size());
  for (const std::string& p : paths) {
    ASSIGN_OR_RETURN(image, ReadPgm(p));
    images.push_back(std::move(image));
  }
  return images;
}

std::string IndexedName(absl::string_view stem, size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04zu", i);
  return absl::StrCat(stem, "_", buf, ".pgm");
}

absl::Status WriteImages(const std::string& dir, absl::string_view stem,
                         const std::vector<Image>& images) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  for (size_t i = 0; i < images.size(); ++i) {
    RETURN_IF_ERROR(
        WritePgm((fs::path(dir) / IndexedName(stem, i)).string(), images[i]));
  }
  return absl::OkStatus();
}

// Writes to `path`, or stdout when it is empty or "-".
absl::Status Emit(const std::string& path, absl::string_view text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return absl::OkStatus();
  }
  return WriteStringToFile(path, text);
}

absl::Status RequireOut(const PipelineConfig& c) {
  if (c.out.empty()) return absl::InvalidArgumentError("--out is required");
  return absl::OkStatus();
}

class Tool {
 public:
  Tool() : app_("Local differential privacy for latent image codes") {
    app_.require_subcommand(1);
    app_.set_help_all_flag("--help-all");
    Register();
  }

  int Run(int argc, char** argv) {
    try {
      app_.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app_.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app_.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app_.exit(e);
    } catch (const CLI::ParseError& e) {
      app_.exit(e);
      return kExitUsage;
    }
    absl::StatusOr<PipelineConfig> config = ResolveConfig();
    if (!config.ok()) {
      std::cerr << "config error: " << config.status().message() << "\n";
      return kExitUsage;
    }
    if (absl::Status s = ValidateConfig(*config); !s.ok()) {
      std::cerr << "config error: " << s.message() << "\n";
      return kExitUsage;
    }
    config_ = *std::move(config);
    absl::StatusOr<int> code = (this->*action_)();
    if (!code.ok()) {
      std::cerr << "error: " << code.status().message() << "\n";
      return kExitRuntime;
    }
    return *code;
  }

 private:
  using Action = absl::StatusOr<int> (Tool::*)();

  CLI::App* Sub(const std::string& name, const std::string& help,
                Action action) {
    CLI::App* sub = app_.add_subcommand(name, help);
    sub->callback([this, action] { action_ = action; });
    sub->add_option("--config", config_path_, "JSON config file");
    return sub;
  }

  template <typename T>
  void Flag(CLI::App* sub, const std::string& name, T PipelineConfig::*field,
            const std::string& help) {
    CLI::Option* opt = sub->add_option(name, flags_.*field, help);
    overrides_.push_back({opt, [this, field](PipelineConfig& c) {
                            c.*field = flags_.*field;
                            return absl::OkStatus();
                          }});
  }

  void Switch(CLI::App* sub, const std::string& name,
              bool PipelineConfig::*field, bool value,
              const std::string& help) {
    CLI::Option* opt = sub->add_flag(name, help);
    overrides_.push_back({opt, [field, value](PipelineConfig& c) {
                            c.*field = value;
                            return absl::OkStatus();
                          }});
  }

  void WeightsFlag(CLI::App* sub) {
    CLI::Option* opt = sub->add_option(
        "--weights", weights_flag_,
        "\"uniform\" or comma-separated positive weights summing to 1");
    overrides_.push_back({opt, [this](PipelineConfig& c) -> absl::Status {
                            if (weights_flag_ == "uniform") {
                              c.weights.reset();
                              return absl::OkStatus();
                            }
                            ASSIGN_OR_RETURN(w, ParseDoubleList(weights_flag_));
                            c.weights = std::move(w);
                            return absl::OkStatus();
                          }});
  }

  void EpsilonsFlag(CLI::App* sub) {
    CLI::Option* opt = sub->add_option("--epsilons", epsilons_flag_,
                                       "comma-separated epsilon grid");
    overrides_.push_back({opt, [this](PipelineConfig& c) -> absl::Status {
                            ASSIGN_OR_RETURN(g, ParseDoubleList(epsilons_flag_));
                            c.epsilons = std::move(g);
                            return absl::OkStatus();
                          }});
  }

  void ClipFlag(CLI::App* sub) {
    CLI::Option* opt = sub->add_option(
        "--clip", clip_flag_, "clipping settings, e.g. 0:1,0.1:0.9");
    overrides_.push_back({opt, [this](PipelineConfig& c) -> absl::Status {
                            ASSIGN_OR_RETURN(l, ParseClipList(clip_flag_));
                            c.clip_settings = std::move(l);
                            return absl::OkStatus();
                          }});
  }

  void Register() {
    CLI::App* sub = Sub("make-synthetic", "generate synthetic face images",
                        &Tool::MakeSynthetic);
    Flag(sub, "--count", &PipelineConfig::count, "number of images");
    Flag(sub, "--width", &PipelineConfig::width, "image width");
    Flag(sub, "--height", &PipelineConfig::height, "image height");
    Flag(sub, "--seed", &PipelineConfig::seed, "random seed");
    Flag(sub, "--out", &PipelineConfig::out, "output directory");

    sub = Sub("fit-codec", "fit the PCA codec on images", &Tool::FitCodecCmd);
    sub->add_option("inputs", inputs_, "PGM files or directories")->required();
    Flag(sub, "--d", &PipelineConfig::d, "latent dimension");
    Flag(sub, "--out", &PipelineConfig::out, "codec output path");

    sub = Sub("encode", "encode images to latents", &Tool::EncodeCmd);
    sub->add_option("inputs", inputs_, "PGM files or directories")->required();
    Flag(sub, "--codec", &PipelineConfig::codec, "codec path");
    Flag(sub, "--out", &PipelineConfig::out, "latent output (.bin or .csv)");

    sub = Sub("decode", "decode latents to images", &Tool::DecodeCmd);
    sub->add_option("inputs", inputs_, "latent file")->required();
    Flag(sub, "--codec", &PipelineConfig::codec, "codec path");
    Flag(sub, "--out", &PipelineConfig::out, "output directory");

    sub = Sub("fit-bounds", "fit clipping bounds from latents",
              &Tool::FitBoundsCmd);
    sub->add_option("inputs", inputs_, "latent file")->required();
    Flag(sub, "--p-low", &PipelineConfig::p_low, "lower quantile level");
    Flag(sub, "--p-high", &PipelineConfig::p_high, "upper quantile level");
    Flag(sub, "--out", &PipelineConfig::out, "bounds JSON output");

    sub = Sub("privatize", "privatize latents or images", &Tool::PrivatizeCmd);
    sub->add_option("inputs", inputs_, "latent file, or PGM files/directories")
        ->required();
    Flag(sub, "--bounds", &PipelineConfig::bounds, "bounds JSON");
    Flag(sub, "--codec", &PipelineConfig::codec, "codec path (image input)");
    Flag(sub, "--epsilon", &PipelineConfig::epsilon, "total privacy budget");
    WeightsFlag(sub);
    Flag(sub, "--seed", &PipelineConfig::seed, "random seed");
    Flag(sub, "--out", &PipelineConfig::out, "output latent file or directory");
    Switch(sub, "--no-post-clip", &PipelineConfig::post_clip, false,
           "skip clipping after noise");

    sub = Sub("metrics", "compare image pairs", &Tool::MetricsCmd);
    sub->add_option("inputs", inputs_, "two PGM files or two directories")
        ->required()
        ->expected(2);
    Flag(sub, "--codec", &PipelineConfig::codec,
         "codec path; adds latent distances");
    Flag(sub, "--epsilon", &PipelineConfig::epsilon,
         "epsilon label for the aggregate row");
    Flag(sub, "--out", &PipelineConfig::out, "JSON lines output");
    sub->add_option("--csv", csv_path_, "aggregate CSV output");

    sub = Sub("sweep", "privacy/utility sweep over an epsilon grid",
              &Tool::SweepCmd);
    sub->add_option("inputs", inputs_,
                    "PGM files or directories (default: synthetic faces)");
    EpsilonsFlag(sub);
    ClipFlag(sub);
    Flag(sub, "--p-low", &PipelineConfig::p_low, "lower quantile level");
    Flag(sub, "--p-high", &PipelineConfig::p_high, "upper quantile level");
    Flag(sub, "--repetitions", &PipelineConfig::repetitions,
         "privatizations per image and epsilon");
    WeightsFlag(sub);
    Flag(sub, "--count", &PipelineConfig::count, "synthetic image count");
    Flag(sub, "--width", &PipelineConfig::width, "synthetic image width");
    Flag(sub, "--height", &PipelineConfig::height, "synthetic image height");
    Flag(sub, "--d", &PipelineConfig::d, "latent dimension");
    Flag(sub, "--codec", &PipelineConfig::codec,
         "existing codec (default: fit on the images)");
    Flag(sub, "--seed", &PipelineConfig::seed, "random seed");
    Flag(sub, "--out", &PipelineConfig::out, "CSV output");

    sub = Sub("audit", "audit the Laplace mechanism", &Tool::AuditCmd);
    Flag(sub, "--bounds", &PipelineConfig::bounds, "bounds JSON");
    Flag(sub, "--epsilon", &PipelineConfig::epsilon, "configured budget");
    WeightsFlag(sub);
    Flag(sub, "--trials", &PipelineConfig::trials, "trials per input");
    Flag(sub, "--bins", &PipelineConfig::bins, "histogram bins");
    Flag(sub, "--seed", &PipelineConfig::seed, "random seed");
    Flag(sub, "--out", &PipelineConfig::out, "JSON report output");
    Switch(sub, "--paper-literal", &PipelineConfig::paper_literal, true,
           "audit the under-noised scale s*w/epsilon");
    Switch(sub, "--no-post-clip", &PipelineConfig::post_clip, false,
           "audit the raw mechanism without post-noise clipping");
    sub->add_option("--pair", pair_path_,
                    "latent file whose first two rows form the audited pair "
                    "(default: box corners)");

    sub = Sub("fit-boundary", "fit a semantic boundary", &Tool::FitBoundaryCmd);
    sub->add_option("inputs", inputs_, "latent file")->required();
    sub->add_option("--labels", labels_path_, "0/1 label file")->required();
    Flag(sub, "--out", &PipelineConfig::out, "boundary JSON output");

    sub = Sub("edit", "move latents along a semantic boundary",
              &Tool::EditCmd);
    sub->add_option("inputs", inputs_, "latent file")->required();
    sub->add_option("--boundary", boundary_path_, "boundary JSON")->required();
    Flag(sub, "--alpha", &PipelineConfig::alpha, "edit step");
    Flag(sub, "--out", &PipelineConfig::out, "latent output");
  }

  absl::StatusOr<PipelineConfig> ResolveConfig() {
    PipelineConfig config;
    if (!config_path_.empty()) {
      ASSIGN_OR_RETURN(text, ReadFileToString(config_path_));
      ASSIGN_OR_RETURN(applied, ApplyConfigJson(text, config));
      config = std::move(applied);
    }
    for (auto& [opt, apply] : overrides_) {
      if (opt->count() > 0) RETURN_IF_ERROR(apply(config));
    }
    return config;
  }

  static absl::Status ValidateConfig(const PipelineConfig& c) {
    if (!(0.0 <= c.p_low && c.p_low <= c.p_high && c.p_high <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "need 0 <= p_low <= p_high <= 1, got ", c.p_low, ", ", c.p_high));
    }
    for (const auto& [lo, hi] : c.clip_settings) {
      if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) {
        return absl::InvalidArgumentError("invalid clip setting");
      }
    }
    if (!(c.epsilon > 0.0)) {
      return absl::InvalidArgumentError("epsilon must be positive");
    }
    for (double e : c.epsilons) {
      if (!(e > 0.0)) {
        return absl::InvalidArgumentError("grid epsilons must be positive");
      }
    }
    if (c.repetitions < 1) {
      return absl::InvalidArgumentError("repetitions must be >= 1");
    }
    return absl::OkStatus();
  }

  absl::StatusOr<int> MakeSynthetic() {
    RETURN_IF_ERROR(RequireOut(config_));
    ASSIGN_OR_RETURN(faces, MakeSyntheticFaces(config_.count, config_.width,
                                               config_.height, config_.seed));
    RETURN_IF_ERROR(WriteImages(config_.out, "face", faces));
    return kExitOk;
  }

  absl::StatusOr<int> FitCodecCmd() {
    RETURN_IF_ERROR(RequireOut(config_));
    ASSIGN_OR_RETURN(images, LoadImages(inputs_));
    ASSIGN_OR_RETURN(model, FitCodec(images, config_.d));
    RETURN_IF_ERROR(WriteCodec(config_.out, model));
    std::cerr << "explained variance ratio: "
              << FormatDouble(model.ExplainedVarianceRatio()) << "\n";
    return kExitOk;
  }

  absl::StatusOr<CodecModel> LoadCodec() {
    if (config_.codec.empty()) {
      return absl::InvalidArgumentError("--codec is required");
    }
    return ReadCodec(config_.codec);
  }

  absl::StatusOr<int> EncodeCmd() {
    RETURN_IF_ERROR(RequireOut(config_));
    ASSIGN_OR_RETURN(model, LoadCodec());
    ASSIGN_OR_RETURN(images, LoadImages(inputs_));
    ASSIGN_OR_RETURN(latents, EncodeAll(model, images));
    RETURN_IF_ERROR(WriteLatents(config_.out, latents));
    return kExitOk;
  }

  absl::StatusOr<int> DecodeCmd() {
    RETURN_IF_ERROR(RequireOut(config_));
    ASSIGN_OR_RETURN(model, LoadCodec());
    ASSIGN_OR_RETURN(latents, SingleLatentInput());
    std::vector<Image> images;
    for (size_t i = 0; i < latents.rows(); ++i) {
      ASSIGN_OR_RETURN(image, Decode(model, latents.RowVector(i)));
      images.push_back(std::move(image));
    }
    RETURN_IF_ERROR(WriteImages(config_.out, "image", images));
    return kExitOk;
  }

  absl::StatusOr<LatentMatrix> SingleLatentInput() {
    if (inputs_.size() != 1) {
      return absl::InvalidArgumentError("expected exactly one latent file");
    }
    return ReadLatents(inputs_.front());
  }

  absl::StatusOr<int> FitBoundsCmd() {
    RETURN_IF_ERROR(RequireOut(config_));
    ASSIGN_OR_RETURN(latents, SingleLatentInput());
    ASSIGN_OR_RETURN(bounds,
                     ComputeClipBounds(latents, config_.p_low, config_.p_high));
    ASSIGN_OR_RETURN(raw, ComputeRawSensitivity(latents));
    RETURN_IF_ERROR(WriteBoundsFile(config_.out, bounds));
    ASSIGN_OR_RETURN(clipped, SensitivityFromBounds(bounds));
    std::cerr << "max sensitivity: " << FormatDouble(clipped.Max())
              << " (observed range max " << FormatDouble(raw.Max()) << ")\n";
    return kExitOk;
  }

  absl::StatusOr<NoisePlan> PlanFor(const ClipBounds& bounds) {
    ASSIGN_OR_RETURN(sensitivity, SensitivityFromBounds(bounds));
    ASSIGN_OR_RETURN(allocation, MakeAllocation(config_, bounds.dim()));
    return MakeNoisePlan(sensitivity, allocation);
  }

  absl::StatusOr<int> PrivatizeCmd() {
    RETURN_IF_ERROR(RequireOut(config_));
    if (config_.bounds.empty()) {
      return absl::InvalidArgumentError("--bounds is required");
    }
    ASSIGN_OR_RETURN(bounds, ReadBoundsFile(config_.bounds));
    ASSIGN_OR_RETURN(plan, PlanFor(bounds));
    const PrivatizeOptions options{.post_clip = config_.post_clip};
    const std::string stamp = BudgetStampJson(plan, bounds, config_.seed);

    if (inputs_.size() == 1 && IsLatentPath(inputs_.front())) {
      ASSIGN_OR_RETURN(latents, ReadLatents(inputs_.front()));
      ASSIGN_OR_RETURN(noisy, PrivatizeBatch(latents, bounds, plan,
                                             config_.seed, options));
      RETURN_IF_ERROR(WriteLatents(config_.out, noisy));
      RETURN_IF_ERROR(WriteStringToFile(config_.out + ".budget.json", stamp));
      return kExitOk;
    }
    if (config_.codec.empty()) {
      return absl::InvalidArgumentError(
          "image input needs a codec: pass --codec");
    }
    ASSIGN_OR_RETURN(model, ReadCodec(config_.codec));
    ASSIGN_OR_RETURN(images, LoadImages(inputs_));
    ASSIGN_OR_RETURN(noisy, PrivatizeImages(images, model, bounds, plan,
                                            config_.seed, options));
    RETURN_IF_ERROR(WriteImages(config_.out, "private", noisy));
    RETURN_IF_ERROR(WriteStringToFile(
        (fs::path(config_.out) / "budget.json").string(), stamp));
    return kExitOk;
  }

  absl::StatusOr<int> MetricsCmd() {
    ASSIGN_OR_RETURN(first, LoadImages({inputs_[0]}));
    ASSIGN_OR_RETURN(second, LoadImages({inputs_[1]}));
    if (first.size() != second.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "image counts differ: ", first.size(), " vs ", second.size()));
    }
    std::optional<CodecModel> model;
    if (!config_.codec.empty()) {
      ASSIGN_OR_RETURN(m, ReadCodec(config_.codec));
      model = std::move(m);
    }
    std::string lines;
    double ssim_sum = 0.0;
    double psnr_sum = 0.0;
    for (size_t i = 0; i < first.size(); ++i) {
      ASSIGN_OR_RETURN(report, CompareImages(first[i], second[i]));
      if (model.has_value()) {
        ASSIGN_OR_RETURN(za, Encode(*model, first[i]));
        ASSIGN_OR_RETURN(zb, Encode(*model, second[i]));
        ASSIGN_OR_RETURN(dist, ComputeLatentDistance(za, zb));
        report.latent = dist;
      }
      absl::StrAppend(&lines, MetricReportToJson(report), "\n");
      ssim_sum += report.ssim;
      psnr_sum += report.psnr;
    }
    RETURN_IF_ERROR(Emit(config_.out, lines));
    if (!csv_path_.empty()) {
      const double n = static_cast<double>(first.size());
      const double mean_psnr = psnr_sum / n;
      RETURN_IF_ERROR(WriteStringToFile(
          csv_path_,
          absl::StrCat("epsilon,mean_ssim,mean_psnr\n",
                       FormatDouble(config_.epsilon), ",",
                       FormatDouble(ssim_sum / n), ",",
                       std::isinf(mean_psnr) ? "inf" : FormatDouble(mean_psnr),
                       "\n")));
    }
    return kExitOk;
  }

  absl::StatusOr<int> SweepCmd() {
    std::vector<Image> images;
    if (inputs_.empty()) {
      ASSIGN_OR_RETURN(faces, MakeSyntheticFaces(config_.count, config_.width,
                                                 config_.height, config_.seed));
      images = std::move(faces);
    } else {
      ASSIGN_OR_RETURN(loaded, LoadImages(inputs_));
      images = std::move(loaded);
    }
    CodecModel model;
    if (config_.codec.empty()) {
      ASSIGN_OR_RETURN(fitted, FitCodec(images, config_.d));
      model = std::move(fitted);
    } else {
      ASSIGN_OR_RETURN(loaded, ReadCodec(config_.codec));
      model = std::move(loaded);
    }
    SweepConfig sweep;
    sweep.epsilons = config_.epsilons.empty()
                         ? DefaultEpsilonGrid(model.latent_dim())
                         : config_.epsilons;
    sweep.repetitions = config_.repetitions;
    sweep.clip_settings = config_.clip_settings;
    if (sweep.clip_settings.empty()) {
      sweep.clip_settings = {{config_.p_low, config_.p_high}};
    }
    sweep.weights = config_.weights;
    sweep.seed = config_.seed;
    ASSIGN_OR_RETURN(points, RunSweep(images, model, sweep));
    RETURN_IF_ERROR(Emit(config_.out, SweepToCsv(points)));
    return kExitOk;
  }

  absl::StatusOr<int> AuditCmd() {
    if (config_.bounds.empty()) {
      return absl::InvalidArgumentError("--bounds is required");
    }
    ASSIGN_OR_RETURN(bounds, ReadBoundsFile(config_.bounds));
    AuditConfig audit;
    audit.epsilon = config_.epsilon;
    if (config_.weights.has_value()) audit.weights = *config_.weights;
    audit.trials = config_.trials;
    audit.bins = config_.bins;
    audit.seed = config_.seed;
    audit.paper_literal = config_.paper_literal;
    audit.post_clip = config_.post_clip;
    AuditReport report;
    if (pair_path_.empty()) {
      ASSIGN_OR_RETURN(r, RunAudit(bounds, audit));
      report = std::move(r);
    } else {
      ASSIGN_OR_RETURN(pair, ReadLatents(pair_path_));
      if (pair.rows() < 2) {
        return absl::InvalidArgumentError("--pair file needs two rows");
      }
      ASSIGN_OR_RETURN(r, RunAudit(bounds, audit, pair.RowVector(0),
                                   pair.RowVector(1)));
      report = std::move(r);
    }
    RETURN_IF_ERROR(Emit(config_.out, AuditReportToJson(report)));
    return report.violation ? kExitViolation : kExitOk;
  }

  absl::StatusOr<int> FitBoundaryCmd() {
    RETURN_IF_ERROR(RequireOut(config_));
    ASSIGN_OR_RETURN(latents, SingleLatentInput());
    ASSIGN_OR_RETURN(text, ReadFileToString(labels_path_));
    ASSIGN_OR_RETURN(labels, ParseLabels(text));
    ASSIGN_OR_RETURN(boundary, FitBoundary(latents, labels));
    RETURN_IF_ERROR(WriteStringToFile(config_.out, BoundaryToJson(boundary)));
    return kExitOk;
  }

  absl::StatusOr<int> EditCmd() {
    RETURN_IF_ERROR(RequireOut(config_));
    ASSIGN_OR_RETURN(latents, SingleLatentInput());
    ASSIGN_OR_RETURN(text, ReadFileToString(boundary_path_));
    ASSIGN_OR_RETURN(boundary, BoundaryFromJson(text));
    std::vector<LatentVector> rows;
    for (size_t i = 0; i < latents.rows(); ++i) {
      ASSIGN_OR_RETURN(edited,
                       EditLatent(latents.RowVector(i), boundary, config_.alpha));
      rows.push_back(std::move(edited));
    }
    ASSIGN_OR_RETURN(out, LatentMatrix::FromVectors(rows));
    RETURN_IF_ERROR(WriteLatents(config_.out, out));
    return kExitOk;
  }

  CLI::App app_;
  Action action_ = nullptr;
  std::string config_path_;
  PipelineConfig flags_;
  PipelineConfig config_;
  std::vector<std::pair<CLI::Option*,
                        std::function<absl::Status(PipelineConfig&)>>>
      overrides_;
  std::vector<std::string> inputs_;
  std::string weights_flag_;
  std::string epsilons_flag_;
  std::string clip_flag_;
  std::string csv_path_;
  std::string pair_path_;
  std::string labels_path_;
  std::string boundary_path_;
};

}  // namespace
}  // namespace latent_ldp

int main(int argc, char** argv) {
  latent_ldp::Tool tool;
  return tool.Run(argc, argv);
}
