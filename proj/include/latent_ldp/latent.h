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

#ifndef LATENT_LDP_LATENT_H_
#define LATENT_LDP_LATENT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace latent_ldp {

// A single point in latent space. Components are always finite and the
// dimension is at least one.
class LatentVector {
 public:
  static absl::StatusOr<LatentVector> Create(std::vector<double> components);

  size_t dim() const { return components_.size(); }
  double operator[](size_t j) const { return components_[j]; }
  std::span<const double> values() const { return components_; }

  friend bool operator==(const LatentVector&, const LatentVector&) = default;

 private:
  explicit LatentVector(std::vector<double> components)
      : components_(std::move(components)) {}

  std::vector<double> components_;
};

// n latent vectors of a shared dimension m, stored row-major.
class LatentMatrix {
 public:
  static absl::StatusOr<LatentMatrix> Create(size_t rows, size_t cols,
                                             std::vector<double> values);
  static absl::StatusOr<LatentMatrix> FromRows(
      const std::vector<std::vector<double>>& rows);
  static absl::StatusOr<LatentMatrix> FromVectors(
      const std::vector<LatentVector>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double at(size_t i, size_t j) const { return values_[i * cols_ + j]; }
  std::span<const double> row(size_t i) const {
    return std::span<const double>(values_).subspan(i * cols_, cols_);
  }
  std::span<const double> values() const { return values_; }
  LatentVector RowVector(size_t i) const;
  std::vector<double> Column(size_t j) const;

  friend bool operator==(const LatentMatrix&, const LatentMatrix&) = default;

 private:
  LatentMatrix(size_t rows, size_t cols, std::vector<double> values)
      : rows_(rows), cols_(cols), values_(std::move(values)) {}

  size_t rows_;
  size_t cols_;
  std::vector<double> values_;
};

// Binary layout: "LDPLATNT", u32 version, u64 n, u64 m, then n*m f64 values.
// All integers and floats are little-endian.
inline constexpr char kLatentMagic[8] = {'L', 'D', 'P', 'L',
                                         'A', 'T', 'N', 'T'};
inline constexpr uint32_t kLatentFormatVersion = 1;
inline constexpr size_t kLatentHeaderSize = 8 + 4 + 8 + 8;

struct LatentFileHeader {
  uint32_t version = kLatentFormatVersion;
  uint64_t rows = 0;
  uint64_t cols = 0;
};

std::string EncodeLatentBinary(const LatentMatrix& data);
absl::StatusOr<LatentMatrix> DecodeLatentBinary(absl::string_view bytes);

absl::StatusOr<LatentMatrix> ReadLatentFile(const std::string& path);
absl::Status WriteLatentFile(const std::string& path, const LatentMatrix& data);

// CSV without a header row; values are written with 17 significant digits.
std::string EncodeLatentCsv(const LatentMatrix& data);
absl::StatusOr<LatentMatrix> DecodeLatentCsv(absl::string_view text);

absl::StatusOr<LatentMatrix> ReadLatentCsv(const std::string& path);
absl::Status WriteLatentCsv(const std::string& path, const LatentMatrix& data);

// Dispatches on extension: ".csv" is CSV, anything else is binary.
absl::StatusOr<LatentMatrix> ReadLatents(const std::string& path);
absl::Status WriteLatents(const std::string& path, const LatentMatrix& data);

// Shared file helpers.
absl::StatusOr<std::string> ReadFileToString(const std::string& path);
absl::Status WriteStringToFile(const std::string& path,
                               absl::string_view contents);

// Formats a double with 17 significant digits.
std::string FormatDouble(double value);

absl::Status CheckSameDim(size_t expected, size_t actual,
                          absl::string_view what);

}  // namespace latent_ldp

#endif  // LATENT_LDP_LATENT_H_
