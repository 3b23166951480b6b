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

#ifndef LATENT_LDP_CODEC_H_
#define LATENT_LDP_CODEC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "latent_ldp/latent.h"

namespace latent_ldp {

// Grayscale image with pixels in [0, 1], row-major.
class Image {
 public:
  static absl::StatusOr<Image> Create(size_t width, size_t height,
                                      std::vector<double> pixels);

  size_t width() const { return width_; }
  size_t height() const { return height_; }
  size_t size() const { return pixels_.size(); }
  double at(size_t x, size_t y) const { return pixels_[y * width_ + x]; }
  std::span<const double> pixels() const { return pixels_; }
  double Mean() const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  Image(size_t width, size_t height, std::vector<double> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {}

  size_t width_;
  size_t height_;
  std::vector<double> pixels_;
};

// PCA encoder/decoder pair: z = B (x - mean), x = clamp(mean + B^T z).
struct CodecModel {
  size_t width = 0;
  size_t height = 0;
  std::vector<double> mean;
  // d rows of width*height, orthonormal.
  std::vector<std::vector<double>> basis;
  // Variance captured by each component on the training set, and the total.
  std::vector<double> component_variance;
  double total_variance = 0.0;

  size_t latent_dim() const { return basis.size(); }
  size_t pixel_count() const { return width * height; }
  // Share of training variance captured by the basis.
  double ExplainedVarianceRatio() const;
};

// Top-d principal directions of the centered images via SVD. Each basis
// vector is flipped so that its largest-magnitude entry is nonnegative.
absl::StatusOr<CodecModel> FitCodec(const std::vector<Image>& images,
                                    size_t latent_dim);

absl::StatusOr<LatentVector> Encode(const CodecModel& model, const Image& x);
// Projection of arbitrary (possibly out-of-range) pixel values.
absl::StatusOr<LatentVector> EncodeRaw(const CodecModel& model,
                                       std::span<const double> pixels);
absl::StatusOr<LatentMatrix> EncodeAll(const CodecModel& model,
                                       const std::vector<Image>& images);

// mean + sum_j z_j basis_j without clamping.
absl::StatusOr<std::vector<double>> DecodeRaw(const CodecModel& model,
                                              const LatentVector& z);
absl::StatusOr<Image> Decode(const CodecModel& model, const LatentVector& z);

// Codec on disk: a latent-format matrix (mean in row 0, basis in rows 1..d)
// and a JSON sidecar at path + ".json" holding the dimensions.
absl::Status WriteCodec(const std::string& path, const CodecModel& model);
absl::StatusOr<CodecModel> ReadCodec(const std::string& path);

// P5 or P2 with maxval 255. Gray level v maps to v / 255.
absl::StatusOr<Image> DecodePgm(absl::string_view bytes);
// Always P5; pixel p is stored as round(255 p).
std::string EncodePgm(const Image& image);
absl::StatusOr<Image> ReadPgm(const std::string& path);
absl::Status WritePgm(const std::string& path, const Image& image);

// Procedural face-like images: bright elliptical head on a dark background,
// two dark eyes and a mouth bar. Positions, sizes and intensities jitter per
// image; the set is a pure function of (count, width, height, seed).
absl::StatusOr<std::vector<Image>> MakeSyntheticFaces(size_t count,
                                                      size_t width,
                                                      size_t height,
                                                      uint64_t seed);

}  // namespace latent_ldp

#endif  // LATENT_LDP_CODEC_H_
