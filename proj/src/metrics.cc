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

#include "latent_ldp/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace latent_ldp {
namespace {

using json = nlohmann::json;

absl::Status CheckSameSize(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    return absl::InvalidArgumentError(
        absl::StrCat("image sizes differ: ", a.width(), "x", a.height(),
                     " vs ", b.width(), "x", b.height()));
  }
  return absl::OkStatus();
}

std::array<double, kSsimWindow> GaussianKernel() {
  std::array<double, kSsimWindow> k{};
  const double c = (kSsimWindow - 1) / 2.0;
  double sum = 0.0;
  for (size_t i = 0; i < kSsimWindow; ++i) {
    const double d = static_cast<double>(i) - c;
    k[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable 'valid' filtering of a width x height plane.
std::vector<double> FilterValid(const std::vector<double>& plane, size_t width,
                                size_t height,
                                const std::array<double, kSsimWindow>& k) {
  const size_t ow = width - kSsimWindow + 1;
  const size_t oh = height - kSsimWindow + 1;
  std::vector<double> horizontal(ow * height);
  for (size_t y = 0; y < height; ++y) {
    const double* row = plane.data() + y * width;
    for (size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (size_t t = 0; t < kSsimWindow; ++t) acc += k[t] * row[x + t];
      horizontal[y * ow + x] = acc;
    }
  }
  std::vector<double> out(ow * oh);
  for (size_t y = 0; y < oh; ++y) {
    for (size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (size_t t = 0; t < kSsimWindow; ++t) {
        acc += k[t] * horizontal[(y + t) * ow + x];
      }
      out[y * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

absl::StatusOr<double> Psnr(const Image& a, const Image& b) {
  if (absl::Status s = CheckSameSize(a, b); !s.ok()) return s;
  double sum = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    const double d = a.pixels()[k] - b.pixels()[k];
    sum += d * d;
  }
  if (sum == 0.0) return kInfinitePsnr;
  const double mse = sum / static_cast<double>(a.size());
  return -10.0 * std::log10(mse);
}

absl::StatusOr<double> Ssim(const Image& a, const Image& b) {
  if (absl::Status s = CheckSameSize(a, b); !s.ok()) return s;
  if (a.width() < kSsimWindow || a.height() < kSsimWindow) {
    return absl::InvalidArgumentError(
        absl::StrCat("SSIM needs at least ", kSsimWindow, "x", kSsimWindow,
                     " pixels, got ", a.width(), "x", a.height()));
  }
  static const std::array<double, kSsimWindow> kernel = GaussianKernel();
  const size_t n = a.size();
  std::vector<double> xa(a.pixels().begin(), a.pixels().end());
  std::vector<double> xb(b.pixels().begin(), b.pixels().end());
  std::vector<double> aa(n), bb(n), ab(n);
  for (size_t k = 0; k < n; ++k) {
    aa[k] = xa[k] * xa[k];
    bb[k] = xb[k] * xb[k];
    ab[k] = xa[k] * xb[k];
  }
  const size_t w = a.width();
  const size_t h = a.height();
  const std::vector<double> mu_a = FilterValid(xa, w, h, kernel);
  const std::vector<double> mu_b = FilterValid(xb, w, h, kernel);
  const std::vector<double> e_aa = FilterValid(aa, w, h, kernel);
  const std::vector<double> e_bb = FilterValid(bb, w, h, kernel);
  const std::vector<double> e_ab = FilterValid(ab, w, h, kernel);

  constexpr double c1 = kSsimK1 * kSsimK1;
  constexpr double c2 = kSsimK2 * kSsimK2;
  double total = 0.0;
  for (size_t k = 0; k < mu_a.size(); ++k) {
    const double ma = mu_a[k];
    const double mb = mu_b[k];
    const double var_a = e_aa[k] - ma * ma;
    const double var_b = e_bb[k] - mb * mb;
    const double cov = e_ab[k] - ma * mb;
    total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
             ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
  }
  const double mean = total / static_cast<double>(mu_a.size());
  return std::min(1.0, std::max(-1.0, mean));
}

absl::StatusOr<LatentDistance> ComputeLatentDistance(const LatentVector& z,
                                                     const LatentVector& z2) {
  if (absl::Status s = CheckSameDim(z.dim(), z2.dim(), "latent distance");
      !s.ok()) {
    return s;
  }
  LatentDistance d;
  for (size_t j = 0; j < z.dim(); ++j) {
    const double diff = std::abs(z[j] - z2[j]);
    d.l1 += diff;
    d.linf = std::max(d.linf, diff);
  }
  return d;
}

absl::StatusOr<MetricReport> CompareImages(const Image& a, const Image& b) {
  MetricReport report;
  absl::StatusOr<double> psnr = Psnr(a, b);
  if (!psnr.ok()) return psnr.status();
  absl::StatusOr<double> ssim = Ssim(a, b);
  if (!ssim.ok()) return ssim.status();
  report.psnr = *psnr;
  report.ssim = *ssim;
  return report;
}

std::string MetricReportToJson(const MetricReport& report) {
  json doc;
  if (std::isinf(report.psnr)) {
    doc["psnr"] = "inf";
  } else {
    doc["psnr"] = report.psnr;
  }
  doc["ssim"] = report.ssim;
  if (report.latent.has_value()) {
    doc["latent_l1"] = report.latent->l1;
    doc["latent_linf"] = report.latent->linf;
  }
  return doc.dump();
}

}  // namespace latent_ldp
