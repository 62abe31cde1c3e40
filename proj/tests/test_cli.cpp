/*
 * Copyright 2026 The platoon-ppc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// Drives the platoon executable end to end.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Result {
  int status = -1;
  std::string output;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("platoon_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) const {
    const fs::path log = dir_ / "log.txt";
    const std::string cmd = std::string(PLATOON_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    Result r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
  }

  static Json read_json(const fs::path& p) {
    std::ifstream in(p);
    return Json::parse(in);
  }

  std::string out(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, PresetsListAndDump) {
  const Result list = run("presets");
  EXPECT_EQ(list.status, 0);
  for (const char* name : {"paper-pf", "paper-bd", "paper-scaling", "hallway-kinematic", "equilibrium"}) {
    EXPECT_NE(list.output.find(name), std::string::npos) << name;
  }
  const Result dump = run("presets --dump paper-bd");
  ASSERT_EQ(dump.status, 0);
  const Json doc = Json::parse(dump.output);
  EXPECT_EQ(doc["architecture"], "bd");
  EXPECT_TRUE(doc.contains("seed"));
  EXPECT_NE(run("presets --dump nope").status, 0);
}

TEST_F(Cli, ValidateReport) {
  const Result ok = run("validate --preset paper-pf");
  EXPECT_EQ(ok.status, 0) << ok.output;
  EXPECT_NE(ok.output.find("valid"), std::string::npos);
  EXPECT_NE(ok.output.find("3.8"), std::string::npos);
  EXPECT_NE(ok.output.find("seed 2017"), std::string::npos);
}

TEST_F(Cli, ValidateNamesInfeasibleGap) {
  const Result r = run("validate --preset paper-pf --set formation.gap=7.8");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("infeasible formation"), std::string::npos) << r.output;
}

TEST_F(Cli, ValidateNamesInitialGapUnderCollisionDistance) {
  const Result r = run("validate --preset paper-pf --set 'initial.positions=[-0.1,-8,-12,-16,-20,-24,-28,-32,-36,-40]'"
                       " --set 'initial.velocities=[0,0,0,0,0,0,0,0,0,0]'");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("initial gap between vehicle 0 and vehicle 1"), std::string::npos) << r.output;
}

TEST_F(Cli, RunWritesArtifacts) {
  const Result r = run("run --preset hallway-kinematic --out " + out("h"));
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir_ / "h" / "trajectory.csv"));
  const Json s = read_json(dir_ / "h" / "summary.json");
  EXPECT_EQ(s["violated"], false);
  EXPECT_EQ(s["seed"], 5);
  EXPECT_EQ(s["scenario_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(s["final_errors"].size(), 4u);
  EXPECT_TRUE(s.contains("max_abs_u"));
  EXPECT_TRUE(s.contains("wall_time"));
}

TEST_F(Cli, RunReferencePreset) {
  const Result r = run("run --preset paper-pf --out " + out("pf"));
  ASSERT_EQ(r.status, 0) << r.output;
  const Json s = read_json(dir_ / "pf" / "summary.json");
  EXPECT_EQ(s["violated"], false);
  EXPECT_EQ(s["N"], 10);
}

TEST_F(Cli, RunFromScenarioFile) {
  ASSERT_EQ(run("presets --dump equilibrium").status, 0);
  const Result dump = run("presets --dump equilibrium");
  {
    std::ofstream f(dir_ / "eq.json");
    f << dump.output;
  }
  const Result r = run("run --scenario " + out("eq.json") + " --set T=5 --set t_s=2 --out " + out("eq"));
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_LT(read_json(dir_ / "eq" / "summary.json")["max_abs_error"].get<double>(), 1e-9);
}

TEST_F(Cli, MissingScenarioFileIsIoError) {
  const Result r = run("run --scenario " + out("missing.json"));
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.output.find("missing.json"), std::string::npos);
}

TEST_F(Cli, ViolationExitsNonzeroWithLocation) {
  const Result r = run("run --preset paper-bd --set dt=0.01 --set T=60 --set t_s=5 --out " + out("v"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("vehicle"), std::string::npos) << r.output;
  const Json s = read_json(dir_ / "v" / "summary.json");
  EXPECT_EQ(s["violated"], true);
  EXPECT_TRUE(s["violation"]["time"].is_number());
}

TEST_F(Cli, PresetAndScenarioAreExclusive) {
  EXPECT_NE(run("run --preset paper-pf --scenario x.json").status, 0);
  EXPECT_NE(run("run").status, 0);
}

TEST_F(Cli, SweepEmptyNsRejected) { EXPECT_EQ(run("sweep --preset paper-scaling --Ns ''").status, 1); }

TEST_F(Cli, SweepRowsPerController) {
  const Result r = run("sweep --preset paper-scaling --Ns 2,3,4 --jobs 1 --set T=2 --set t_s=1 --out " + out("s"));
  ASSERT_EQ(r.status, 0) << r.output;
  std::ifstream csv(dir_ / "s" / "sweep.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "controller,architecture,N,E_ts,E_ss,violated");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 12);
  EXPECT_EQ(read_json(dir_ / "s" / "sweep.json")["rows"].size(), 12u);
}

TEST_F(Cli, SingleSizeSweepMatchesRun) {
  const std::string sets = " --set T=4 --set t_s=2";
  ASSERT_EQ(run("sweep --preset paper-scaling --Ns 10 --controllers pf" + sets + " --out " + out("s")).status, 0);
  ASSERT_EQ(run("run --preset paper-scaling" + sets + " --out " + out("r")).status, 0);
  const Json row = read_json(dir_ / "s" / "sweep.json")["rows"][0];
  const Json single = read_json(dir_ / "r" / "summary.json");
  EXPECT_EQ(row["E_ts"].get<double>(), single["E_ts"].get<double>());
  EXPECT_EQ(row["E_ss"].get<double>(), single["E_ss"].get<double>());
}

}  // namespace
