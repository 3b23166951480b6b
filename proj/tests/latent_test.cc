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

#include <unistd.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "gtest/gtest.h"

namespace latent_ldp {
namespace {

LatentMatrix Matrix(const std::vector<std::vector<double>>& rows) {
  return *LatentMatrix::FromRows(rows);
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("latent_test_" + std::to_string(::getpid()) + "_" + name))
      .string();
}

TEST(LatentVectorTest, RejectsNonFiniteAndEmpty) {
  EXPECT_FALSE(LatentVector::Create({}).ok());
  EXPECT_FALSE(
      LatentVector::Create({1.0, std::numeric_limits<double>::quiet_NaN()})
          .ok());
  EXPECT_FALSE(
      LatentVector::Create({std::numeric_limits<double>::infinity()}).ok());
  EXPECT_TRUE(LatentVector::Create({0.0, -2.5}).ok());
}

TEST(LatentMatrixTest, RaggedRowsRejected) {
  EXPECT_FALSE(LatentMatrix::FromRows({{1, 2}, {3, 4, 5}}).ok());
  EXPECT_FALSE(LatentMatrix::Create(2, 2, {1, 2, 3}).ok());
}

TEST(LatentBinaryTest, RoundTripsSmallMatrix) {
  const LatentMatrix m = Matrix({{1, 2, 3}, {4, 5, 6}});
  const std::string path = TempPath("small.bin");
  ASSERT_TRUE(WriteLatentFile(path, m).ok());
  absl::StatusOr<LatentMatrix> back = ReadLatentFile(path);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->rows(), 2u);
  EXPECT_EQ(back->cols(), 3u);
  EXPECT_EQ(*back, m);
  std::filesystem::remove(path);
}

TEST(LatentBinaryTest, ZeroEncodesAsZeroBits) {
  const std::string bytes = EncodeLatentBinary(Matrix({{0.0}}));
  ASSERT_EQ(bytes.size(), kLatentHeaderSize + 8);
  EXPECT_EQ(bytes.substr(0, 8), "LDPLATNT");
  // version 1, n = 1, m = 1, little-endian.
  EXPECT_EQ(bytes.substr(8, 4), std::string("\x01\x00\x00\x00", 4));
  EXPECT_EQ(bytes.substr(12, 8), std::string("\x01\0\0\0\0\0\0\0", 8));
  EXPECT_EQ(bytes.substr(20, 8), std::string("\x01\0\0\0\0\0\0\0", 8));
  EXPECT_EQ(bytes.substr(kLatentHeaderSize), std::string(8, '\0'));
}

TEST(LatentBinaryTest, LittleEndianPayload) {
  const std::string bytes = EncodeLatentBinary(Matrix({{1.0}}));
  // 1.0 = 0x3FF0000000000000.
  EXPECT_EQ(bytes.substr(kLatentHeaderSize),
            std::string("\0\0\0\0\0\0\xF0\x3F", 8));
}

TEST(LatentBinaryTest, RandomRoundTripIsBitExact) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  std::vector<std::vector<double>> rows(100, std::vector<double>(9));
  for (auto& r : rows) {
    for (double& v : r) v = dist(gen) * std::ldexp(1.0, static_cast<int>(gen() % 40) - 20);
  }
  rows[3][0] = -0.0;
  rows[4][1] = std::numeric_limits<double>::denorm_min();
  const LatentMatrix m = Matrix(rows);
  absl::StatusOr<LatentMatrix> back = DecodeLatentBinary(EncodeLatentBinary(m));
  ASSERT_TRUE(back.ok());
  for (size_t k = 0; k < m.values().size(); ++k) {
    EXPECT_EQ(std::bit_cast<uint64_t>(m.values()[k]),
              std::bit_cast<uint64_t>(back->values()[k]));
  }
}

TEST(LatentBinaryTest, TruncatedPayloadIsDetected) {
  std::string bytes = EncodeLatentBinary(Matrix({{1, 2}, {3, 4}}));
  bytes.resize(bytes.size() - 3);
  absl::StatusOr<LatentMatrix> m = DecodeLatentBinary(bytes);
  ASSERT_FALSE(m.ok());
  EXPECT_EQ(m.status().code(), absl::StatusCode::kDataLoss);
}

TEST(LatentBinaryTest, HugeDeclaredSizeIsTruncationNotOverflow) {
  std::string bytes = EncodeLatentBinary(Matrix({{1}}));
  for (int b = 12; b < 28; ++b) bytes[b] = '\xff';
  EXPECT_EQ(DecodeLatentBinary(bytes).status().code(),
            absl::StatusCode::kDataLoss);
}

TEST(LatentBinaryTest, TrailingBytesAreRejected) {
  std::string bytes = EncodeLatentBinary(Matrix({{1, 2}}));
  bytes += std::string(8, '\0');
  EXPECT_FALSE(DecodeLatentBinary(bytes).ok());
}

TEST(LatentBinaryTest, BadMagicAndVersion) {
  std::string bytes = EncodeLatentBinary(Matrix({{1}}));
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_FALSE(DecodeLatentBinary(bad_magic).ok());
  std::string bad_version = bytes;
  bad_version[8] = 2;
  EXPECT_FALSE(DecodeLatentBinary(bad_version).ok());
  EXPECT_FALSE(DecodeLatentBinary("LDP").ok());
}

TEST(LatentBinaryTest, NaNPayloadIsRejected) {
  std::string bytes = EncodeLatentBinary(Matrix({{1, 2}}));
  const uint64_t nan_bits =
      std::bit_cast<uint64_t>(std::numeric_limits<double>::quiet_NaN());
  for (int b = 0; b < 8; ++b) {
    bytes[kLatentHeaderSize + 8 + b] = static_cast<char>(nan_bits >> (8 * b));
  }
  absl::StatusOr<LatentMatrix> m = DecodeLatentBinary(bytes);
  ASSERT_FALSE(m.ok());
  EXPECT_NE(m.status().message().find("non-finite"), std::string::npos);
}

TEST(LatentBinaryTest, MissingFile) {
  EXPECT_FALSE(ReadLatentFile(TempPath("does_not_exist.bin")).ok());
}

TEST(LatentCsvTest, ParsesSimpleMatrix) {
  absl::StatusOr<LatentMatrix> m = DecodeLatentCsv("1.5,2.5\n3.5,4.5");
  ASSERT_TRUE(m.ok()) << m.status();
  EXPECT_EQ(*m, Matrix({{1.5, 2.5}, {3.5, 4.5}}));
}

TEST(LatentCsvTest, AcceptsCrlfQuotesAndTrailingNewline) {
  absl::StatusOr<LatentMatrix> m = DecodeLatentCsv("\"1\", 2e0\r\n-3,+4\r\n");
  ASSERT_TRUE(m.ok()) << m.status();
  EXPECT_EQ(*m, Matrix({{1, 2}, {-3, 4}}));
}

TEST(LatentCsvTest, RaggedAndNonNumericRejected) {
  absl::StatusOr<LatentMatrix> ragged = DecodeLatentCsv("1,2\n3,4,5\n");
  ASSERT_FALSE(ragged.ok());
  EXPECT_NE(ragged.status().message().find("ragged"), std::string::npos);
  EXPECT_FALSE(DecodeLatentCsv("1,abc\n").ok());
  EXPECT_FALSE(DecodeLatentCsv("1,,2\n").ok());
  EXPECT_FALSE(DecodeLatentCsv("nan\n").ok());
  EXPECT_FALSE(DecodeLatentCsv("").ok());
}

TEST(LatentCsvTest, SeventeenDigitRoundTripIsExact) {
  std::mt19937_64 gen(11);
  std::vector<std::vector<double>> rows(50, std::vector<double>(4));
  for (auto& r : rows) {
    for (double& v : r) v = std::bit_cast<double>(gen() & 0x7fefffffffffffffULL | (gen() & 0x8000000000000000ULL));
  }
  const LatentMatrix m = Matrix(rows);
  const std::string path = TempPath("rt.csv");
  ASSERT_TRUE(WriteLatents(path, m).ok());
  absl::StatusOr<LatentMatrix> back = ReadLatents(path);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, m);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace latent_ldp
