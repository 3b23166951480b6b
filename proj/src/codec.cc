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

#include "latent_ldp/codec.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "latent_ldp/random.h"

namespace latent_ldp {
namespace {

using json = nlohmann::json;

double Clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Coverage of a shape whose boundary sits at signed pixel distance `d`
// (negative inside), antialiased over one pixel.
double Coverage(double d) { return Clamp01(0.5 - d); }

double EllipseDistance(double x, double y, double cx, double cy, double rx,
                       double ry) {
  const double r = std::hypot((x - cx) / rx, (y - cy) / ry);
  return (r - 1.0) * std::min(rx, ry);
}

double Mix(double base, double paint, double alpha) {
  return base + alpha * (paint - base);
}

class PgmScanner {
 public:
  explicit PgmScanner(absl::string_view bytes) : bytes_(bytes) {}

  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      const unsigned char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  absl::StatusOr<uint64_t> NextUnsigned(absl::string_view what) {
    SkipSpaceAndComments();
    if (pos_ >= bytes_.size()) {
      return absl::DataLossError(absl::StrCat("truncated PGM: missing ", what));
    }
    if (!std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed PGM: expected ", what));
    }
    uint64_t v = 0;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + static_cast<uint64_t>(bytes_[pos_] - '0');
      if (v > (1ULL << 32)) {
        return absl::InvalidArgumentError(
            absl::StrCat("malformed PGM: ", what, " too large"));
      }
      ++pos_;
    }
    return v;
  }

  size_t pos() const { return pos_; }
  void Advance(size_t n) { pos_ += n; }

 private:
  absl::string_view bytes_;
  size_t pos_ = 0;
};

}  // namespace

absl::StatusOr<Image> Image::Create(size_t width, size_t height,
                                    std::vector<double> pixels) {
  if (width == 0 || height == 0) {
    return absl::InvalidArgumentError("image dimensions must be positive");
  }
  if (pixels.size() != width * height) {
    return absl::InvalidArgumentError(
        absl::StrCat("image ", width, "x", height, " needs ", width * height,
                     " pixels, got ", pixels.size()));
  }
  for (size_t k = 0; k < pixels.size(); ++k) {
    if (!(pixels[k] >= 0.0 && pixels[k] <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("pixel ", k, " outside [0,1]: ", pixels[k]));
    }
  }
  return Image(width, height, std::move(pixels));
}

double Image::Mean() const {
  return std::accumulate(pixels_.begin(), pixels_.end(), 0.0) /
         static_cast<double>(pixels_.size());
}

double CodecModel::ExplainedVarianceRatio() const {
  if (total_variance <= 0.0) return 1.0;
  return std::accumulate(component_variance.begin(), component_variance.end(),
                         0.0) /
         total_variance;
}

absl::StatusOr<CodecModel> FitCodec(const std::vector<Image>& images,
                                    size_t latent_dim) {
  if (images.size() < 2) {
    return absl::InvalidArgumentError("codec fit needs at least two images");
  }
  const size_t width = images.front().width();
  const size_t height = images.front().height();
  const size_t n = images.size();
  const size_t p = width * height;
  for (size_t i = 1; i < n; ++i) {
    if (images[i].width() != width || images[i].height() != height) {
      return absl::InvalidArgumentError(absl::StrCat(
          "image ", i, " is ", images[i].width(), "x", images[i].height(),
          ", expected ", width, "x", height));
    }
  }
  if (latent_dim == 0 || latent_dim > std::min(n - 1, p)) {
    return absl::InvalidArgumentError(
        absl::StrCat("latent dimension ", latent_dim, " must be in [1, ",
                     std::min(n - 1, p), "]"));
  }

  Eigen::MatrixXd x(n, p);
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < p; ++k) x(i, k) = images[i].pixels()[k];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const Eigen::MatrixXd& v = svd.matrixV();

  CodecModel model;
  model.width = width;
  model.height = height;
  model.mean.assign(mean.data(), mean.data() + p);
  model.total_variance = x.squaredNorm() / static_cast<double>(n - 1);
  for (size_t j = 0; j < latent_dim; ++j) {
    std::vector<double> direction(p);
    size_t argmax = 0;
    for (size_t k = 0; k < p; ++k) {
      direction[k] = v(k, j);
      if (std::abs(direction[k]) > std::abs(direction[argmax])) argmax = k;
    }
    if (direction[argmax] < 0.0) {
      for (double& e : direction) e = -e;
    }
    model.basis.push_back(std::move(direction));
    model.component_variance.push_back(sigma(j) * sigma(j) /
                                       static_cast<double>(n - 1));
  }
  return model;
}

absl::StatusOr<LatentVector> EncodeRaw(const CodecModel& model,
                                       std::span<const double> pixels) {
  if (absl::Status s =
          CheckSameDim(model.pixel_count(), pixels.size(), "encode pixels");
      !s.ok()) {
    return s;
  }
  std::vector<double> z(model.latent_dim(), 0.0);
  for (size_t j = 0; j < z.size(); ++j) {
    const std::vector<double>& b = model.basis[j];
    double acc = 0.0;
    for (size_t k = 0; k < b.size(); ++k) acc += b[k] * (pixels[k] - model.mean[k]);
    z[j] = acc;
  }
  return LatentVector::Create(std::move(z));
}

absl::StatusOr<LatentVector> Encode(const CodecModel& model, const Image& x) {
  if (x.width() != model.width || x.height() != model.height) {
    return absl::InvalidArgumentError(
        absl::StrCat("image is ", x.width(), "x", x.height(), ", codec expects ",
                     model.width, "x", model.height));
  }
  return EncodeRaw(model, x.pixels());
}

absl::StatusOr<LatentMatrix> EncodeAll(const CodecModel& model,
                                       const std::vector<Image>& images) {
  std::vector<LatentVector> rows;
  rows.reserve(images.size());
  for (const Image& image : images) {
    absl::StatusOr<LatentVector> z = Encode(model, image);
    if (!z.ok()) return z.status();
    rows.push_back(*std::move(z));
  }
  return LatentMatrix::FromVectors(rows);
}

absl::StatusOr<std::vector<double>> DecodeRaw(const CodecModel& model,
                                              const LatentVector& z) {
  if (absl::Status s = CheckSameDim(model.latent_dim(), z.dim(), "decode");
      !s.ok()) {
    return s;
  }
  std::vector<double> pixels = model.mean;
  for (size_t j = 0; j < z.dim(); ++j) {
    const std::vector<double>& b = model.basis[j];
    const double zj = z[j];
    for (size_t k = 0; k < pixels.size(); ++k) pixels[k] += zj * b[k];
  }
  return pixels;
}

absl::StatusOr<Image> Decode(const CodecModel& model, const LatentVector& z) {
  absl::StatusOr<std::vector<double>> raw = DecodeRaw(model, z);
  if (!raw.ok()) return raw.status();
  for (double& v : *raw) v = Clamp01(v);
  return Image::Create(model.width, model.height, *std::move(raw));
}

absl::Status WriteCodec(const std::string& path, const CodecModel& model) {
  std::vector<double> values = model.mean;
  for (const auto& b : model.basis) values.insert(values.end(), b.begin(), b.end());
  absl::StatusOr<LatentMatrix> matrix = LatentMatrix::Create(
      model.latent_dim() + 1, model.pixel_count(), std::move(values));
  if (!matrix.ok()) return matrix.status();
  if (absl::Status s = WriteLatentFile(path, *matrix); !s.ok()) return s;
  json sidecar = {{"width", model.width},
                  {"height", model.height},
                  {"d", model.latent_dim()},
                  {"component_variance", model.component_variance},
                  {"total_variance", model.total_variance}};
  return WriteStringToFile(path + ".json", sidecar.dump(2) + "\n");
}

absl::StatusOr<CodecModel> ReadCodec(const std::string& path) {
  absl::StatusOr<LatentMatrix> matrix = ReadLatentFile(path);
  if (!matrix.ok()) return matrix.status();
  absl::StatusOr<std::string> text = ReadFileToString(path + ".json");
  if (!text.ok()) return text.status();
  json sidecar = json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (sidecar.is_discarded()) {
    return absl::InvalidArgumentError("codec sidecar is not valid JSON");
  }
  CodecModel model;
  size_t d = 0;
  try {
    model.width = sidecar.at("width").get<size_t>();
    model.height = sidecar.at("height").get<size_t>();
    d = sidecar.at("d").get<size_t>();
    model.component_variance =
        sidecar.value("component_variance", std::vector<double>{});
    model.total_variance = sidecar.value("total_variance", 0.0);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed codec sidecar: ", e.what()));
  }
  if (matrix->rows() != d + 1 || matrix->cols() != model.width * model.height) {
    return absl::InvalidArgumentError(
        "codec matrix does not match sidecar dimensions");
  }
  auto row = matrix->row(0);
  model.mean.assign(row.begin(), row.end());
  for (size_t j = 1; j <= d; ++j) {
    row = matrix->row(j);
    model.basis.emplace_back(row.begin(), row.end());
  }
  return model;
}

absl::StatusOr<Image> DecodePgm(absl::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    return absl::InvalidArgumentError("not a PNM file");
  }
  const char kind = bytes[1];
  if (kind != '5' && kind != '2') {
    return absl::InvalidArgumentError(absl::StrCat(
        "unsupported format P", std::string(1, kind), ": only P5 and P2 PGM"));
  }
  PgmScanner scan(bytes);
  scan.Advance(2);
  absl::StatusOr<uint64_t> width = scan.NextUnsigned("width");
  if (!width.ok()) return width.status();
  absl::StatusOr<uint64_t> height = scan.NextUnsigned("height");
  if (!height.ok()) return height.status();
  absl::StatusOr<uint64_t> maxval = scan.NextUnsigned("maxval");
  if (!maxval.ok()) return maxval.status();
  if (*maxval != 255) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported maxval ", *maxval, ", expected 255"));
  }
  if (*width == 0 || *height == 0) {
    return absl::InvalidArgumentError("PGM has zero size");
  }
  const size_t count = *width * *height;
  std::vector<double> pixels(count);
  if (kind == '5') {
    // Exactly one whitespace byte separates the header from the raster.
    scan.Advance(1);
    if (scan.pos() > bytes.size() || bytes.size() - scan.pos() < count) {
      return absl::DataLossError(absl::StrCat(
          "truncated PGM raster: need ", count, " bytes"));
    }
    for (size_t k = 0; k < count; ++k) {
      pixels[k] = static_cast<unsigned char>(bytes[scan.pos() + k]) / 255.0;
    }
  } else {
    for (size_t k = 0; k < count; ++k) {
      absl::StatusOr<uint64_t> v = scan.NextUnsigned("pixel value");
      if (!v.ok()) return v.status();
      if (*v > 255) {
        return absl::InvalidArgumentError(
            absl::StrCat("pixel value ", *v, " exceeds maxval"));
      }
      pixels[k] = static_cast<double>(*v) / 255.0;
    }
  }
  return Image::Create(*width, *height, std::move(pixels));
}

std::string EncodePgm(const Image& image) {
  std::string out =
      absl::StrCat("P5\n", image.width(), " ", image.height(), "\n255\n");
  for (double p : image.pixels()) {
    out.push_back(static_cast<char>(
        static_cast<unsigned char>(std::lround(Clamp01(p) * 255.0))));
  }
  return out;
}

absl::StatusOr<Image> ReadPgm(const std::string& path) {
  absl::StatusOr<std::string> bytes = ReadFileToString(path);
  if (!bytes.ok()) return bytes.status();
  absl::StatusOr<Image> image = DecodePgm(*bytes);
  if (!image.ok()) {
    return absl::Status(image.status().code(),
                        absl::StrCat(path, ": ", image.status().message()));
  }
  return image;
}

absl::Status WritePgm(const std::string& path, const Image& image) {
  return WriteStringToFile(path, EncodePgm(image));
}

absl::StatusOr<std::vector<Image>> MakeSyntheticFaces(size_t count,
                                                      size_t width,
                                                      size_t height,
                                                      uint64_t seed) {
  if (count < 2) {
    return absl::InvalidArgumentError("need at least two synthetic faces");
  }
  if (width < 8 || height < 8) {
    return absl::InvalidArgumentError("synthetic faces need at least 8x8");
  }
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  std::vector<Image> faces;
  faces.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    RandomSource rng(seed, i);
    auto uniform = [&rng](double lo, double hi) {
      return lo + (hi - lo) * rng.Uniform();
    };
    const double background = uniform(0.05, 0.25);
    const double skin = uniform(0.55, 0.9);
    const double light = uniform(-0.15, 0.15);
    const double cx = 0.5 * w + uniform(-0.06, 0.06) * w;
    const double cy = 0.5 * h + uniform(-0.05, 0.05) * h;
    const double rx = uniform(0.28, 0.38) * w;
    const double ry = uniform(0.36, 0.45) * h;
    const double eye_y = cy - ry * uniform(0.15, 0.35);
    const double eye_dx = rx * uniform(0.3, 0.5);
    const double eye_r = uniform(0.04, 0.08) * w;
    const double eye_level = skin - uniform(0.3, 0.5);
    const double mouth_y = cy + ry * uniform(0.35, 0.55);
    const double mouth_hw = rx * uniform(0.25, 0.5);
    const double mouth_hh = uniform(0.02, 0.05) * h;
    const double mouth_level = skin - uniform(0.2, 0.4);

    std::vector<double> pixels(width * height);
    for (size_t y = 0; y < height; ++y) {
      for (size_t x = 0; x < width; ++x) {
        const double px = static_cast<double>(x) + 0.5;
        const double py = static_cast<double>(y) + 0.5;
        const double shade = skin + light * (px / w - 0.5);
        double v = Mix(background, shade,
                       Coverage(EllipseDistance(px, py, cx, cy, rx, ry)));
        for (double sign : {-1.0, 1.0}) {
          v = Mix(v, eye_level,
                  Coverage(EllipseDistance(px, py, cx + sign * eye_dx, eye_y,
                                           eye_r, eye_r)));
        }
        v = Mix(v, mouth_level,
                Coverage(EllipseDistance(px, py, cx, mouth_y, mouth_hw,
                                         mouth_hh)));
        pixels[y * width + x] = Clamp01(v);
      }
    }
    absl::StatusOr<Image> face = Image::Create(width, height, std::move(pixels));
    if (!face.ok()) return face.status();
    faces.push_back(*std::move(face));
  }
  return faces;
}

}  // namespace latent_ldp
