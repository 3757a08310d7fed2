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


#include "memassist/qlearn.h"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "test_util.h"

namespace memassist {
namespace {

// Reference values from tests/oracles/oracles.py.
constexpr double kChiSquare3DofP999 = 16.26623619623813;
constexpr double kDecayFor16000 = 0.9998560987864609;
constexpr double kChainQ31 = 1.0;
constexpr double kChainQ72 = 0.9;

TrainOptions SmallRun(int episodes, uint64_t seed) {
  TrainOptions o;
  o.episodes = episodes;
  o.seed = seed;
  o.schedule = Schedule::ForEpisodes(episodes);
  return o;
}

TEST(SelectActionTest, GreedyPicksArgmax) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(SelectAction({1, 2, 3, 0}, 0.0, rng), AssistAction::kSugRow);
  }
  EXPECT_EQ(GreedyAction({1, 2, 3, 0}), AssistAction::kSugRow);
}

TEST(SelectActionTest, GreedyTiesStayInTieSet) {
  Rng rng(2);
  std::set<AssistAction> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(SelectAction({5, 5, 0, 0}, 0.0, rng));
  EXPECT_EQ(seen, (std::set<AssistAction>{AssistAction::kNoHelp, AssistAction::kSugCol}));
  EXPECT_EQ(GreedyAction({5, 5, 0, 0}), AssistAction::kNoHelp);
}

TEST(SelectActionTest, FullExplorationIsUniform) {
  constexpr int kDraws = 100000;
  Rng rng(3);
  std::array<int, kNumActions> count{};
  for (int i = 0; i < kDraws; ++i) {
    ++count[static_cast<int>(SelectAction({9, 0, 0, 0}, 1.0, rng))];
  }
  double chi2 = 0.0;
  const double expected = kDraws / 4.0;
  for (int c : count) {
    EXPECT_NEAR(c / static_cast<double>(kDraws), 0.25, 0.01);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, kChiSquare3DofP999);
}

TEST(UpdateTest, OneStepCollapse) {
  ActionValues q;
  Update(q, {4, AssistAction::kSugCol, 5.0, 9, false}, 1.0, 0.0);
  EXPECT_EQ(q.at(4, AssistAction::kSugCol), 5.0);
}

TEST(UpdateTest, ZeroLearningRateIsNoOp) {
  ActionValues q;
  q.at(4, AssistAction::kSugCol) = 1.5;
  q.at(9, AssistAction::kNoHelp) = 7.0;
  const ActionValues before = q;
  Update(q, {4, AssistAction::kSugCol, 5.0, 9, false}, 0.0, 0.8);
  EXPECT_EQ(q, before);
}

TEST(UpdateTest, TwoStepChain) {
  ActionValues q;
  Update(q, {3, AssistAction::kSugCol, 2.0, 7, false}, 0.5, 0.8);
  Update(q, {7, AssistAction::kSugRow, 1.0, 3, false}, 0.5, 0.8);
  EXPECT_NEAR(q.at(3, AssistAction::kSugCol), kChainQ31, 1e-12);
  EXPECT_NEAR(q.at(7, AssistAction::kSugRow), kChainQ72, 1e-12);
}

TEST(UpdateTest, TerminalIgnoresNextState) {
  ActionValues q;
  q.at(2, AssistAction::kNoHelp) = 100.0;
  Update(q, {1, AssistAction::kNoHelp, 3.0, 2, true}, 1.0, 0.8);
  EXPECT_EQ(q.at(1, AssistAction::kNoHelp), 3.0);
}

TEST(ScheduleTest, Endpoints) {
  const Schedule s = Schedule::ForEpisodes(20000);
  const ScheduleValues first = ScheduleAt(s, 0);
  EXPECT_EQ(first.epsilon, 1.0);
  EXPECT_EQ(first.alpha, 0.1);
  const ScheduleValues late = ScheduleAt(s, 1000000);
  EXPECT_EQ(late.epsilon, 0.1);
  EXPECT_EQ(late.alpha, 0.95);
}

TEST(ScheduleTest, ReachesFloorAtEightyPercent) {
  const Schedule s = Schedule::ForEpisodes(20000);
  EXPECT_NEAR(s.epsilon_decay, kDecayFor16000, 1e-15);
  EXPECT_LE(ScheduleAt(s, 16000).epsilon, 0.1 + 1e-9);
  EXPECT_GT(ScheduleAt(s, 15000).epsilon, 0.1 + 1e-3);
  EXPECT_NEAR(ScheduleAt(s, 16000).alpha, 0.95, 1e-9);
  EXPECT_LT(ScheduleAt(s, 8000).alpha, 0.95);
}

TEST(ScheduleTest, Monotone) {
  const Schedule s = Schedule::ForEpisodes(1000);
  for (int k = 1; k < 1200; ++k) {
    EXPECT_LE(ScheduleAt(s, k).epsilon, ScheduleAt(s, k - 1).epsilon);
    EXPECT_GE(ScheduleAt(s, k).alpha, ScheduleAt(s, k - 1).alpha);
  }
  EXPECT_EQ(ScheduleFromJson(ScheduleToJson(s)), s);
}

TEST(TrainTest, SingleEpisodeTouchesAtMostTwoCellsPerMove) {
  const TrainResult r = Train(SmallRun(1, 4));
  ASSERT_EQ(r.curve.size(), 1u);
  int nonzero = 0;
  for (int s = 0; s < kNumStates; ++s) {
    for (double v : r.table.values.row(s)) nonzero += v != 0.0;
  }
  EXPECT_GT(nonzero, 0);
  EXPECT_LE(nonzero, 2 * r.curve[0].moves);
}

TEST(TrainTest, TransitionsPerEpisodeEqualFlips) {
  const TrainResult r = Train(SmallRun(1, 4));
  int64_t total = 0;
  for (int64_t v : r.table.visits) total += v;
  EXPECT_EQ(total, 2 * r.curve[0].moves);
}

TEST(TrainTest, SameSeedGivesIdenticalFiles) {
  testing::TempDir dir;
  SaveQTable(Train(SmallRun(300, 17)).table, dir.file("a.json"));
  SaveQTable(Train(SmallRun(300, 17)).table, dir.file("b.json"));
  EXPECT_EQ(testing::ReadFile(dir.file("a.json")), testing::ReadFile(dir.file("b.json")));
  SaveQTable(Train(SmallRun(300, 18)).table, dir.file("c.json"));
  EXPECT_NE(testing::ReadFile(dir.file("a.json")), testing::ReadFile(dir.file("c.json")));
}

TEST(TrainTest, UnvisitedStatesKeepInitialValues) {
  const TrainResult r = Train(SmallRun(1, 5));
  int unvisited = 0;
  for (int s = 0; s < kNumStates; ++s) {
    if (r.table.visits[s] == 0) {
      ++unvisited;
      EXPECT_EQ(r.table.values.row(s), ActionRow{}) << ToString(Decode(s));
    }
  }
  EXPECT_GT(unvisited, 0);
}

TEST(TrainTest, ValuesStayBounded) {
  const TrainOptions o = SmallRun(2000, 6);
  const TrainResult r = Train(o);
  // Largest single reward: an assistive second-flip reward at the nf cap.
  double r_max = 0.0;
  for (AssistAction a : kAllActions) {
    for (int p = 0; p < kNumPhases; ++p) {
      const auto phase = static_cast<GamePhase>(p);
      r_max = std::max({r_max, RewardFirst(a, 1, o.rewards),
                        RewardSecond(a, 1, phase, o.rewards),
                        RewardSecond(a, 24 * 12, phase, o.rewards)});
    }
  }
  const double bound = r_max / (1.0 - o.gamma);
  for (int s = 0; s < kNumStates; ++s) {
    for (double v : r.table.values.row(s)) {
      EXPECT_TRUE(std::isfinite(v));
      EXPECT_LE(std::abs(v), bound);
    }
  }
}

TEST(TrainTest, LearningCurveImproves) {
  const TrainResult r = Train(SmallRun(20000, 1));
  ASSERT_EQ(r.curve.size(), 20000u);
  const std::size_t third = r.curve.size() / 3;
  double early = 0.0;
  double late = 0.0;
  for (std::size_t i = 0; i < third; ++i) {
    early += r.curve[i].moves;
    late += r.curve[r.curve.size() - third + i].moves;
  }
  EXPECT_GT(early / third, late / third);
  EXPECT_EQ(r.curve.front().epsilon, 1.0);
  EXPECT_EQ(r.curve.back().epsilon, 0.1);
}

TEST(TrainTest, RejectsBadOptions) {
  TrainOptions o = SmallRun(10, 1);
  o.episodes = 0;
  EXPECT_THROW(Train(o), std::invalid_argument);
  o = SmallRun(10, 1);
  o.gamma = 1.0;
  EXPECT_THROW(Train(o), std::invalid_argument);
}

TEST(QTableTest, AllZeroTableIsNoHelpEverywhere) {
  for (AssistAction a : GreedyPolicy(QTable{})) EXPECT_EQ(a, AssistAction::kNoHelp);
}

TEST(QTableTest, JsonRoundTrip) {
  QTable q = Train(SmallRun(200, 9)).table;
  q.meta.created_at = "2026-01-01T00:00:00Z";
  q.meta.experiment = {{"seed", 9}};
  const QTable back = QTableFromJson(QTableToJson(q));
  EXPECT_EQ(back, q);
  EXPECT_EQ(GreedyPolicy(back), GreedyPolicy(q));
}

TEST(QTableTest, FileRoundTripIsStable) {
  testing::TempDir dir;
  const QTable q = Train(SmallRun(100, 10)).table;
  SaveQTable(q, dir.file("q.json"));
  const QTable loaded = LoadQTable(dir.file("q.json"));
  EXPECT_EQ(loaded, q);
  SaveQTable(loaded, dir.file("q2.json"));
  EXPECT_EQ(testing::ReadFile(dir.file("q.json")), testing::ReadFile(dir.file("q2.json")));
}

TEST(QTableTest, ListsAllStatesWithMeta) {
  const nlohmann::json j = QTableToJson(QTable{});
  EXPECT_EQ(j["schema_version"], kQTableSchemaVersion);
  EXPECT_EQ(j["states"].size(), 48u);
  for (const char* key : {"gamma", "schedule", "seed", "rewards", "episodes_trained",
                          "player", "mode", "initial_state", "created_at"}) {
    EXPECT_TRUE(j["meta"].contains(key)) << key;
  }
}

TEST(QTableTest, RejectsMalformedInput) {
  const nlohmann::json good = QTableToJson(QTable{});

  nlohmann::json j = good;
  j["schema_version"] = 2;
  EXPECT_THROW(QTableFromJson(j), std::invalid_argument);

  j = good;
  j["states"].erase(j["states"].begin());
  EXPECT_THROW(QTableFromJson(j), std::invalid_argument);

  j = good;
  j["states"][1] = j["states"][0];
  EXPECT_THROW(QTableFromJson(j), std::invalid_argument);

  j = good;
  j["states"][5]["q"][2] = nullptr;
  EXPECT_THROW(QTableFromJson(j), std::invalid_argument);

  j = good;
  j["states"][5]["q"][2] = "nan";
  EXPECT_THROW(QTableFromJson(j), std::invalid_argument);

  j = good;
  j["states"][5]["q"] = {1.0, 2.0};
  EXPECT_THROW(QTableFromJson(j), std::invalid_argument);
}

// Reachable states of a finite MDP from its initial state.
std::vector<bool> Reachable(const FiniteMdp& mdp) {
  std::vector<bool> seen(static_cast<std::size_t>(mdp.num_states()), false);
  std::vector<int> stack = {mdp.initial};
  seen[mdp.initial] = true;
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (const auto& outs : mdp.outcomes[s]) {
      for (const MdpOutcome& o : outs) {
        if (o.next >= 0 && !seen[o.next]) {
          seen[o.next] = true;
          stack.push_back(o.next);
        }
      }
    }
  }
  return seen;
}

TEST(OracleTest, TwoPairEnvironmentIsFinite) {
  const FiniteMdp mdp = BuildTwoPairEnv();
  EXPECT_GT(mdp.num_states(), 4);
  EXPECT_EQ(mdp.labels.size(), static_cast<std::size_t>(mdp.num_states()));
  for (bool r : Reachable(mdp)) EXPECT_TRUE(r);
}

TEST(OracleTest, QLearningMatchesValueIteration) {
  const FiniteMdp mdp = BuildTwoPairEnv();
  const ValueIterationResult vi = ValueIterate(mdp, 0.8);
  for (uint64_t seed : {1, 2, 3}) {
    std::vector<int64_t> visits;
    const ActionValues q =
        QLearnFinite(mdp, 100000, Schedule::ForEpisodes(100000), 0.8, seed, &visits);
    for (int s = 0; s < mdp.num_states(); ++s) {
      ASSERT_GT(visits[s], 0) << mdp.labels[s];
      EXPECT_EQ(GreedyAction(q.row(s)), vi.policy[s]) << mdp.labels[s];
      for (int a = 0; a < kNumActions; ++a) {
        EXPECT_NEAR(q.row(s)[a], vi.q.row(s)[a], 1e-6) << mdp.labels[s];
      }
    }
  }
}

TEST(OracleTest, ValueIterationIsIdempotent) {
  const FiniteMdp mdp = BuildTwoPairEnv();
  const ValueIterationResult a = ValueIterate(mdp, 0.8);
  const ValueIterationResult b = ValueIterate(mdp, 0.8);
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.policy, b.policy);
}

TEST(OracleTest, ZeroDiscountMaximisesImmediateReward) {
  const FiniteMdp mdp = BuildTwoPairEnv();
  const ValueIterationResult vi = ValueIterate(mdp, 0.0);
  for (int s = 0; s < mdp.num_states(); ++s) {
    ActionRow immediate{};
    for (int a = 0; a < kNumActions; ++a) {
      for (const MdpOutcome& o : mdp.outcomes[s][a]) immediate[a] += o.prob * o.reward;
    }
    EXPECT_EQ(vi.policy[s], GreedyAction(immediate)) << mdp.labels[s];
  }
}

TEST(OracleTest, ValueIterationOnHandBuiltChain) {
  // s0 --a--> s1 --a--> end; NoHelp pays 1 at each step, SugCard pays 3 only
  // at the last step.
  FiniteMdp mdp;
  mdp.outcomes.resize(2);
  mdp.labels = {"s0", "s1"};
  for (int a = 0; a < kNumActions; ++a) {
    mdp.outcomes[0][a] = {{1.0, a == 0 ? 1.0 : 0.0, 1}};
    mdp.outcomes[1][a] = {{1.0, a == 0 ? 1.0 : (a == 3 ? 3.0 : 0.0), -1}};
  }
  const ValueIterationResult vi = ValueIterate(mdp, 0.5);
  EXPECT_EQ(vi.policy[1], AssistAction::kSugCard);
  EXPECT_DOUBLE_EQ(vi.q.row(1)[3], 3.0);
  EXPECT_DOUBLE_EQ(vi.q.row(0)[0], 1.0 + 0.5 * 3.0);
  EXPECT_EQ(vi.policy[0], AssistAction::kNoHelp);
}

}  // namespace
}  // namespace memassist
