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

#include "latent_ldp/latent.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"

namespace latent_ldp {
namespace {

absl::Status CheckFinite(std::span<const double> values) {
  for (size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite latent value at flat index ", k));
    }
  }
  return absl::OkStatus();
}

void PutU32(std::string& out, uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>(v >> (8 * b)));
}

void PutU64(std::string& out, uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>(v >> (8 * b)));
}

uint64_t GetLe(absl::string_view bytes, size_t offset, int width) {
  uint64_t v = 0;
  for (int b = 0; b < width; ++b) {
    v |= static_cast<uint64_t>(static_cast<unsigned char>(bytes[offset + b]))
         << (8 * b);
  }
  return v;
}

bool EndsWithCsv(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

}  // namespace

absl::StatusOr<LatentVector> LatentVector::Create(
    std::vector<double> components) {
  if (components.empty()) {
    return absl::InvalidArgumentError("latent vector must have dimension >= 1");
  }
  if (absl::Status s = CheckFinite(components); !s.ok()) return s;
  return LatentVector(std::move(components));
}

absl::StatusOr<LatentMatrix> LatentMatrix::Create(size_t rows, size_t cols,
                                                  std::vector<double> values) {
  if (rows == 0 || cols == 0) {
    return absl::InvalidArgumentError(
        "latent matrix needs at least one row and one column");
  }
  if (values.size() != rows * cols) {
    return absl::InvalidArgumentError(
        absl::StrCat("latent matrix declared ", rows, "x", cols, " but holds ",
                     values.size(), " values"));
  }
  if (absl::Status s = CheckFinite(values); !s.ok()) return s;
  return LatentMatrix(rows, cols, std::move(values));
}

absl::StatusOr<LatentMatrix> LatentMatrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return absl::InvalidArgumentError("no rows");
  const size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", i, " has ", rows[i].size(),
                       " components, expected ", cols));
    }
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return Create(rows.size(), cols, std::move(values));
}

absl::StatusOr<LatentMatrix> LatentMatrix::FromVectors(
    const std::vector<LatentVector>& rows) {
  if (rows.empty()) return absl::InvalidArgumentError("no rows");
  const size_t cols = rows.front().dim();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].dim() != cols) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", i, " has dimension ", rows[i].dim(),
                       ", expected ", cols));
    }
    values.insert(values.end(), rows[i].values().begin(),
                  rows[i].values().end());
  }
  return Create(rows.size(), cols, std::move(values));
}

LatentVector LatentMatrix::RowVector(size_t i) const {
  auto r = row(i);
  return *LatentVector::Create(std::vector<double>(r.begin(), r.end()));
}

std::vector<double> LatentMatrix::Column(size_t j) const {
  std::vector<double> col(rows_);
  for (size_t i = 0; i < rows_; ++i) col[i] = at(i, j);
  return col;
}

std::string EncodeLatentBinary(const LatentMatrix& data) {
  std::string out;
  out.reserve(kLatentHeaderSize + data.values().size() * 8);
  out.append(kLatentMagic, sizeof(kLatentMagic));
  PutU32(out, kLatentFormatVersion);
  PutU64(out, data.rows());
  PutU64(out, data.cols());
  for (double v : data.values()) PutU64(out, std::bit_cast<uint64_t>(v));
  return out;
}

absl::StatusOr<LatentMatrix> DecodeLatentBinary(absl::string_view bytes) {
  if (bytes.size() < kLatentHeaderSize) {
    return absl::InvalidArgumentError("malformed header: file too short");
  }
  if (std::memcmp(bytes.data(), kLatentMagic, sizeof(kLatentMagic)) != 0) {
    return absl::InvalidArgumentError("malformed header: bad magic");
  }
  LatentFileHeader header;
  header.version = static_cast<uint32_t>(GetLe(bytes, 8, 4));
  header.rows = GetLe(bytes, 12, 8);
  header.cols = GetLe(bytes, 20, 8);
  if (header.version != kLatentFormatVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed header: unsupported version ", header.version));
  }
  if (header.rows == 0 || header.cols == 0) {
    return absl::InvalidArgumentError("malformed header: empty dimensions");
  }
  const uint64_t payload = bytes.size() - kLatentHeaderSize;
  const uint64_t payload_values = payload / 8;
  if (header.cols > payload_values ||
      header.rows > payload_values / header.cols) {
    return absl::DataLossError(absl::StrCat(
        "truncated payload: header declares ", header.rows, "x", header.cols,
        " values but only ", payload, " bytes follow"));
  }
  if (header.rows * header.cols * 8 != payload) {
    return absl::InvalidArgumentError(
        absl::StrCat("payload length ", payload,
                     " does not match header dimensions ", header.rows, "x",
                     header.cols));
  }
  std::vector<double> values(header.rows * header.cols);
  for (size_t k = 0; k < values.size(); ++k) {
    values[k] =
        std::bit_cast<double>(GetLe(bytes, kLatentHeaderSize + 8 * k, 8));
  }
  return LatentMatrix::Create(header.rows, header.cols, std::move(values));
}

absl::StatusOr<LatentMatrix> ReadLatentFile(const std::string& path) {
  absl::StatusOr<std::string> bytes = ReadFileToString(path);
  if (!bytes.ok()) return bytes.status();
  return DecodeLatentBinary(*bytes);
}

absl::Status WriteLatentFile(const std::string& path,
                             const LatentMatrix& data) {
  return WriteStringToFile(path, EncodeLatentBinary(data));
}

std::string FormatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string EncodeLatentCsv(const LatentMatrix& data) {
  std::string out;
  for (size_t i = 0; i < data.rows(); ++i) {
    for (size_t j = 0; j < data.cols(); ++j) {
      if (j > 0) out.push_back(',');
      out += FormatDouble(data.at(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<LatentMatrix> DecodeLatentCsv(absl::string_view text) {
  std::vector<double> values;
  size_t cols = 0;
  size_t rows = 0;
  size_t line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripSuffix(line, "\r");
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    size_t cells = 0;
    for (absl::string_view cell : absl::StrSplit(line, ',')) {
      cell = absl::StripAsciiWhitespace(cell);
      if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
        cell = absl::StripAsciiWhitespace(cell.substr(1, cell.size() - 2));
      }
      if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
      double v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "non-numeric cell '", cell, "' on line ", line_no));
      }
      values.push_back(v);
      ++cells;
    }
    if (rows == 0) {
      cols = cells;
    } else if (cells != cols) {
      return absl::InvalidArgumentError(
          absl::StrCat("ragged row on line ", line_no, ": ", cells,
                       " cells, expected ", cols));
    }
    ++rows;
  }
  if (rows == 0) return absl::InvalidArgumentError("CSV contains no rows");
  return LatentMatrix::Create(rows, cols, std::move(values));
}

absl::StatusOr<LatentMatrix> ReadLatentCsv(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFileToString(path);
  if (!text.ok()) return text.status();
  return DecodeLatentCsv(*text);
}

absl::Status WriteLatentCsv(const std::string& path,
                            const LatentMatrix& data) {
  return WriteStringToFile(path, EncodeLatentCsv(data));
}

absl::StatusOr<LatentMatrix> ReadLatents(const std::string& path) {
  return EndsWithCsv(path) ? ReadLatentCsv(path) : ReadLatentFile(path);
}

absl::Status WriteLatents(const std::string& path, const LatentMatrix& data) {
  return EndsWithCsv(path) ? WriteLatentCsv(path, data)
                           : WriteLatentFile(path, data);
}

absl::StatusOr<std::string> ReadFileToString(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("read failed: ", path));
  return std::move(ss).str();
}

absl::Status WriteStringToFile(const std::string& path,
                               absl::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot open for write: ", path));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::Status CheckSameDim(size_t expected, size_t actual,
                          absl::string_view what) {
  if (expected != actual) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch for ", what, ": expected ", expected, ", got ",
        actual));
  }
  return absl::OkStatus();
}

}  // namespace latent_ldp
