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

// Drives the command-line binary end to end.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

int RunCli(const std::string& args) {
  const std::string cmd =
      std::string(LATENT_LDP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(fs::temp_directory_path() /
                        ("cli_test_" + std::to_string(::getpid())));
    fs::create_directories(*dir_);
    ASSERT_EQ(RunCli("make-synthetic --count 40 --width 16 --height 16 --seed 3 "
                  "--out " + P("faces")),
              0);
    ASSERT_EQ(RunCli("fit-codec " + P("faces") + " --d 6 --out " + P("codec.bin")),
              0);
    ASSERT_EQ(RunCli("encode " + P("faces") + " --codec " + P("codec.bin") +
                  " --out " + P("latents.bin")),
              0);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }
  static std::string P(const std::string& name) {
    return (*dir_ / name).string();
  }
  static fs::path* dir_;
};

fs::path* CliTest::dir_ = nullptr;

TEST_F(CliTest, FullRangeBoundsAreColumnExtremes) {
  ASSERT_EQ(RunCli("encode " + P("faces") + " --codec " + P("codec.bin") +
                " --out " + P("latents.csv")),
            0);
  ASSERT_EQ(RunCli("fit-bounds " + P("latents.csv") +
                " --p-low 0 --p-high 1 --out " + P("b01.json")),
            0);
  json b = json::parse(Slurp(P("b01.json")));
  std::ifstream csv(P("latents.csv"));
  std::string line;
  std::vector<double> lo(6, 1e300), hi(6, -1e300);
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (size_t j = 0; std::getline(ss, cell, ','); ++j) {
      lo[j] = std::min(lo[j], std::stod(cell));
      hi[j] = std::max(hi[j], std::stod(cell));
    }
  }
  EXPECT_EQ(b["lower"].get<std::vector<double>>(), lo);
  EXPECT_EQ(b["upper"].get<std::vector<double>>(), hi);
}

TEST_F(CliTest, InvertedQuantilesAreUsageErrors) {
  EXPECT_EQ(RunCli("fit-bounds " + P("latents.bin") +
                " --p-low 0.9 --p-high 0.1 --out " + P("bad.json")),
            2);
  EXPECT_FALSE(fs::exists(P("bad.json")));
}

TEST_F(CliTest, UnknownConfigKeyIsUsageError) {
  std::ofstream(P("bad_config.json")) << R"({"epsilon": 1, "colour": 3})";
  EXPECT_EQ(RunCli("fit-bounds " + P("latents.bin") + " --config " +
                P("bad_config.json") + " --out " + P("x.json")),
            2);
  EXPECT_EQ(RunCli("no-such-command"), 2);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  std::ofstream(P("cfg.json")) << R"({"p_low": 0.2, "p_high": 0.8})";
  ASSERT_EQ(RunCli("fit-bounds " + P("latents.bin") + " --config " + P("cfg.json") +
                " --p-high 0.7 --out " + P("cfg_bounds.json")),
            0);
  json b = json::parse(Slurp(P("cfg_bounds.json")));
  EXPECT_EQ(b["p_low"], 0.2);
  EXPECT_EQ(b["p_high"], 0.7);
}

TEST_F(CliTest, PrivatizeLatentsIsSeedDeterministic) {
  ASSERT_EQ(RunCli("fit-bounds " + P("latents.bin") +
                " --p-low 0.1 --p-high 0.9 --out " + P("b.json")),
            0);
  const std::string base = "privatize " + P("latents.bin") + " --bounds " +
                           P("b.json") + " --epsilon 6 ";
  ASSERT_EQ(RunCli(base + "--seed 1 --out " + P("p1.bin")), 0);
  ASSERT_EQ(RunCli(base + "--seed 1 --out " + P("p1b.bin")), 0);
  ASSERT_EQ(RunCli(base + "--seed 2 --out " + P("p2.csv")), 0);
  EXPECT_EQ(Slurp(P("p1.bin")), Slurp(P("p1b.bin")));
  EXPECT_NE(Slurp(P("p1.bin")), "");
  json stamp = json::parse(Slurp(P("p1.bin.budget.json")));
  EXPECT_EQ(stamp["epsilon"], 6.0);
  EXPECT_EQ(stamp["seed"], 1);
  EXPECT_EQ(stamp["weights"].size(), 6u);

  json b = json::parse(Slurp(P("b.json")));
  auto lower = b["lower"].get<std::vector<double>>();
  auto upper = b["upper"].get<std::vector<double>>();
  std::ifstream csv(P("p2.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (size_t j = 0; std::getline(ss, cell, ','); ++j) {
      const double v = std::stod(cell);
      EXPECT_GE(v, lower[j]);
      EXPECT_LE(v, upper[j]);
    }
    ++rows;
  }
  EXPECT_EQ(rows, 40);
}

TEST_F(CliTest, PrivatizeImagesNeedsCodec) {
  ASSERT_EQ(RunCli("fit-bounds " + P("latents.bin") + " --out " + P("bi.json")),
            0);
  EXPECT_EQ(RunCli("privatize " + P("faces") + " --bounds " + P("bi.json") +
                " --out " + P("noisy")),
            1);
  ASSERT_EQ(RunCli("privatize " + P("faces") + " --bounds " + P("bi.json") +
                " --codec " + P("codec.bin") + " --epsilon 60 --out " +
                P("noisy")),
            0);
  EXPECT_TRUE(fs::exists(P("noisy/private_0039.pgm")));
  EXPECT_TRUE(fs::exists(P("noisy/budget.json")));
  ASSERT_EQ(RunCli("metrics " + P("faces") + " " + P("noisy") + " --codec " +
                P("codec.bin") + " --epsilon 60 --out " + P("m.jsonl") +
                " --csv " + P("m.csv")),
            0);
  std::istringstream lines(Slurp(P("m.jsonl")));
  std::string first;
  std::getline(lines, first);
  json report = json::parse(first);
  EXPECT_TRUE(report.contains("ssim"));
  EXPECT_TRUE(report.contains("psnr"));
  EXPECT_TRUE(report.contains("latent_l1"));
  EXPECT_EQ(Slurp(P("m.csv")).substr(0, 27), "epsilon,mean_ssim,mean_psnr");
}

TEST_F(CliTest, AuditVerdictsAndExitCodes) {
  std::ofstream(P("box.json"))
      << R"({"p_low":0,"p_high":1,"lower":[0,0,0,0],"upper":[4,4,4,4]})";
  EXPECT_EQ(RunCli("audit --bounds " + P("box.json") +
                " --epsilon 1 --trials 20000 --out " + P("ok.json")),
            0);
  EXPECT_EQ(json::parse(Slurp(P("ok.json")))["verdict"], "pass");
  EXPECT_EQ(RunCli("audit --bounds " + P("box.json") +
                " --epsilon 1 --trials 20000 --paper-literal --out " +
                P("bad.json")),
            3);
  json bad = json::parse(Slurp(P("bad.json")));
  EXPECT_EQ(bad["verdict"], "violation");
  EXPECT_NEAR(bad["analytic_epsilon"].get<double>(), 16.0, 1e-12);
}

TEST_F(CliTest, BoundaryAndEdit) {
  std::ofstream labels(P("labels.txt"));
  for (int i = 0; i < 40; ++i) labels << (i % 3 == 0 ? 1 : 0) << "\n";
  labels.close();
  ASSERT_EQ(RunCli("fit-boundary " + P("latents.bin") + " --labels " +
                P("labels.txt") + " --out " + P("boundary.json")),
            0);
  ASSERT_EQ(RunCli("edit " + P("latents.bin") + " --boundary " +
                P("boundary.json") + " --alpha 0 --out " + P("edited.bin")),
            0);
  EXPECT_EQ(Slurp(P("edited.bin")), Slurp(P("latents.bin")));
  ASSERT_EQ(RunCli("decode " + P("edited.bin") + " --codec " + P("codec.bin") +
                " --out " + P("decoded")),
            0);
  EXPECT_TRUE(fs::exists(P("decoded/image_0000.pgm")));
}

TEST_F(CliTest, SweepWritesOneRowPerSettingAndEpsilon) {
  ASSERT_EQ(RunCli("sweep " + P("faces") + " --d 6 --epsilons 6,60 "
                "--clip 0:1,0.25:0.75 --repetitions 1 --out " + P("sweep.csv")),
            0);
  const std::string csv = Slurp(P("sweep.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

}  // namespace
