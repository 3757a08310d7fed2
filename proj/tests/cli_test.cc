// Copyright 2026 The memassist Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.h"

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "memassist/metrics.h"
#include "memassist/qlearn.h"
#include "test_util.h"

namespace memassist {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult RunTool(std::vector<std::string> args) {
  args.insert(args.begin(), "memassist");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  std::string Train(const std::string& out, uint64_t seed, int episodes = 400) {
    const CliResult r = RunTool({"--seed", std::to_string(seed), "--out", out, "train",
                             "--episodes", std::to_string(episodes)});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return out + "/qtable.json";
  }

  CliResult Simulate(const std::string& out, const std::string& policy, int threads = 1,
                     const std::string& format = "csv") {
    return RunTool({"--seed", "5", "--out", out, "simulate", "--policy", policy, "--games", "60",
                "--threads", std::to_string(threads), "--format", format});
  }

  testing::TempDir dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(RunTool({}).code, kExitUsage);
  EXPECT_EQ(RunTool({"fly"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"train", "--episodes", "0"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"--mode", "psychic", "train"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"simulate", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"eval-policy"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"--help"}).code, kExitOk);
}

TEST_F(CliTest, ConfigErrors) {
  EXPECT_EQ(RunTool({"--config", dir_.file("missing.json"), "train"}).code, kExitConfig);
  testing::WriteFile(dir_.file("bad.json"), R"({"gamma": 3})");
  const CliResult bad = RunTool({"--config", dir_.file("bad.json"), "train"});
  EXPECT_EQ(bad.code, kExitConfig);
  EXPECT_NE(bad.err.find("gamma"), std::string::npos);
  EXPECT_EQ(Simulate(dir_.file("o"), dir_.file("nope.json")).code, kExitConfig);
  EXPECT_EQ(RunTool({"eval-policy", dir_.file("nope.json")}).code, kExitConfig);
  EXPECT_EQ(RunTool({"compare", dir_.file("a.csv"), dir_.file("b.csv")}).code, kExitConfig);
  EXPECT_EQ(RunTool({"serve", "--listen", "nocolon"}).code, kExitConfig);
}

TEST_F(CliTest, EvalPolicyExitCodes) {
  SaveQTable(QTable{}, dir_.file("zero.json"));
  const CliResult zero =
      RunTool({"eval-policy", dir_.file("zero.json"), "--json", dir_.file("zero_report.json")});
  EXPECT_EQ(zero.code, kExitCheckFailed);
  EXPECT_NE(zero.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(json::parse(testing::ReadFile(dir_.file("zero_report.json")))["all_pass"], false);

  QTable good;
  for (int s = 0; s < kNumStates; ++s) {
    const MdpState st = Decode(s);
    AssistAction best = AssistAction::kNoHelp;
    if (IsSecondFlipContext(st)) {
      best = AssistAction::kSugRow;
    } else if (st.prev_outcome == PrevOutcome::kSWrong && st.phase != GamePhase::kEnd) {
      best = AssistAction::kSugCol;
    }
    good.values.at(s, best) = 1.0;
    good.visits[s] = 1;
  }
  SaveQTable(good, dir_.file("good.json"));
  const CliResult ok = RunTool({"eval-policy", dir_.file("good.json")});
  EXPECT_EQ(ok.code, kExitOk) << ok.out;
}

TEST_F(CliTest, TrainIsReproducible) {
  const std::string a = Train(dir_.file("a"), 7);
  const std::string b = Train(dir_.file("b"), 7);
  const std::string c = Train(dir_.file("c"), 8);
  // The embedded config records the output directory; everything else matches.
  auto without_out = [](const std::string& path) {
    json j = json::parse(testing::ReadFile(path));
    j["meta"]["experiment"].erase("out");
    return j.dump();
  };
  EXPECT_EQ(without_out(a), without_out(b));
  EXPECT_NE(without_out(a), without_out(c));
  const std::string curve_a = testing::ReadFile(dir_.file("a/training_curve.csv"));
  const std::string curve_b = testing::ReadFile(dir_.file("b/training_curve.csv"));
  EXPECT_EQ(curve_a.substr(curve_a.find('\n')), curve_b.substr(curve_b.find('\n')));
  EXPECT_EQ(curve_a.rfind("# config: ", 0), 0u);
}

TEST_F(CliTest, EmbeddedConfigReproducesTraining) {
  const std::string out = dir_.file("run");
  const std::string first = testing::ReadFile(Train(out, 11));
  const json embedded = json::parse(first)["meta"]["experiment"];
  ASSERT_TRUE(embedded.is_object());
  testing::WriteFile(dir_.file("embedded.json"), embedded.dump());
  fs::remove_all(out);
  const CliResult r = RunTool({"--config", dir_.file("embedded.json"), "train"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(testing::ReadFile(out + "/qtable.json"), first);
}

TEST_F(CliTest, SimulateIsReproducibleAcrossThreads) {
  const std::string policy = Train(dir_.file("t"), 3);
  ASSERT_EQ(Simulate(dir_.file("s1"), policy, 1).code, kExitOk);
  ASSERT_EQ(Simulate(dir_.file("s2"), policy, 4).code, kExitOk);
  const std::string one = testing::ReadFile(dir_.file("s1/simulation.csv"));
  const std::string four = testing::ReadFile(dir_.file("s2/simulation.csv"));
  // Only the config line (which names the output directory) may differ.
  EXPECT_EQ(one.substr(one.find('\n')), four.substr(four.find('\n')));
  ASSERT_EQ(Simulate(dir_.file("s1"), policy, 3).code, kExitOk);
  EXPECT_EQ(testing::ReadFile(dir_.file("s1/simulation.csv")), one);
}

TEST_F(CliTest, EmbeddedConfigReproducesSimulation) {
  const std::string policy = Train(dir_.file("t"), 4);
  const std::string out = dir_.file("sim");
  ASSERT_EQ(Simulate(out, policy).code, kExitOk);
  const std::string first = testing::ReadFile(out + "/simulation.csv");
  const RunStats stats = ReadRunStats(out + "/simulation.csv");
  testing::WriteFile(dir_.file("cfg.json"), ExperimentConfigToJson(stats.config).dump());
  fs::remove_all(out);
  const CliResult r = RunTool({"--config", dir_.file("cfg.json"), "simulate"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(testing::ReadFile(out + "/simulation.csv"), first);
}

TEST_F(CliTest, CompareAndExport) {
  ASSERT_EQ(Simulate(dir_.file("none"), "none").code, kExitOk);
  ASSERT_EQ(Simulate(dir_.file("perfect"), "perfect", 1, "json").code, kExitOk);
  const CliResult cmp = RunTool({"compare", dir_.file("none/simulation.csv"),
                             dir_.file("perfect/simulation.json"), "--json",
                             dir_.file("cmp.json")});
  ASSERT_EQ(cmp.code, kExitOk) << cmp.err;
  EXPECT_NE(cmp.out.find("moves"), std::string::npos);
  const json report = json::parse(testing::ReadFile(dir_.file("cmp.json")));
  EXPECT_TRUE(report.contains("metrics"));

  const CliResult exp = RunTool({"--out", dir_.file("x"), "export",
                             dir_.file("perfect/simulation.json"), "--format", "csv"});
  ASSERT_EQ(exp.code, kExitOk) << exp.err;
  EXPECT_EQ(ReadRunStats(dir_.file("x/simulation.csv")).games,
            ReadRunStats(dir_.file("perfect/simulation.json")).games);
  EXPECT_EQ(RunTool({"--out", dir_.file("x"), "export", dir_.file("x/simulation.csv"),
                 "--format", "csv"})
                .code,
            kExitConfig);
}

}  // namespace
}  // namespace memassist
