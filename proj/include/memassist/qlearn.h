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

// Tabular Q-learning over the assistance MDP.

#ifndef MEMASSIST_QLEARN_H_
#define MEMASSIST_QLEARN_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "memassist/assist_mdp.h"
#include "memassist/mentalising.h"
#include "memassist/player.h"
#include "memassist/rng.h"

namespace memassist {

using ActionRow = std::array<double, kNumActions>;

// Dense |S| x 4 value table, zero-initialised.
class ActionValues {
 public:
  explicit ActionValues(int num_states = kNumStates)
      : rows_(static_cast<std::size_t>(num_states), ActionRow{}) {}

  int num_states() const { return static_cast<int>(rows_.size()); }
  ActionRow& row(int s) { return rows_.at(static_cast<std::size_t>(s)); }
  const ActionRow& row(int s) const { return rows_.at(static_cast<std::size_t>(s)); }
  double& at(int s, AssistAction a) { return row(s)[static_cast<int>(a)]; }
  double at(int s, AssistAction a) const { return row(s)[static_cast<int>(a)]; }
  double MaxValue(int s) const;

  friend bool operator==(const ActionValues&, const ActionValues&) = default;

 private:
  std::vector<ActionRow> rows_;
};

// Lowest-index argmax.
AssistAction GreedyAction(const ActionRow& row);

struct Schedule {
  double epsilon0 = 1.0;
  double epsilon_floor = 0.1;
  double epsilon_decay = 1.0;  // per episode, multiplicative
  double alpha0 = 0.1;
  double alpha_cap = 0.95;
  double alpha_growth = 0.0;  // per episode, additive

  // Exponential epsilon decay and linear alpha growth that both reach their
  // limits after `fraction` of `episodes`.
  static Schedule ForEpisodes(int episodes, double fraction = 0.8);

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct ScheduleValues {
  double epsilon;
  double alpha;
};

ScheduleValues ScheduleAt(const Schedule& sched, int episode);

nlohmann::json ScheduleToJson(const Schedule& s);
Schedule ScheduleFromJson(const nlohmann::json& j);

struct Transition {
  int state = 0;
  AssistAction action = AssistAction::kNoHelp;
  double reward = 0.0;
  int next_state = 0;
  bool terminal = false;
  DecisionPoint decision_point = DecisionPoint::kFirstFlip;
};

// Epsilon-greedy; greedy ties are broken uniformly with `rng`.
AssistAction SelectAction(const ActionRow& row, double epsilon, Rng& rng);

// One temporal-difference backup; terminal transitions back up zero.
void Update(ActionValues& q, const Transition& t, double alpha, double gamma);

struct QTableMeta {
  int schema_version = 1;
  int64_t episodes_trained = 0;
  double gamma = 0.8;
  Schedule schedule;
  uint64_t seed = 0;
  RewardParams rewards;
  PlayerSpec player;
  AssistMode mode = AssistMode::kToM;
  int max_moves = 0;
  MdpState initial_state = kInitialState;
  std::optional<std::string> created_at;
  nlohmann::json experiment;  // full config that produced the table, if any

  friend bool operator==(const QTableMeta&, const QTableMeta&) = default;
};

struct QTable {
  ActionValues values{kNumStates};
  std::array<int64_t, kNumStates> visits{};
  QTableMeta meta;

  const ActionRow& row(const MdpState& s) const { return values.row(Encode(s)); }
  AssistAction Greedy(const MdpState& s) const { return GreedyAction(row(s)); }

  friend bool operator==(const QTable&, const QTable&) = default;
};

inline constexpr int kQTableSchemaVersion = 1;

nlohmann::json QTableToJson(const QTable& q);
// Throws std::invalid_argument for unknown schema versions, missing or
// duplicated states and non-finite values.
QTable QTableFromJson(const nlohmann::json& j);
void SaveQTable(const QTable& q, const std::string& path);
QTable LoadQTable(const std::string& path);

// Greedy action per state, lowest-index tie-break.
std::array<AssistAction, kNumStates> GreedyPolicy(const QTable& q);

struct TrainOptions {
  int episodes = 20000;
  PlayerSpec player;
  uint64_t seed = 0;
  Schedule schedule = Schedule::ForEpisodes(20000);
  RewardParams rewards;
  double gamma = 0.8;
  AssistMode mode = AssistMode::kToM;
  int window = 0;
  int max_moves = 500;
  MdpState initial_state = kInitialState;
};

struct CurvePoint {
  int episode = 0;
  int moves = 0;
  double trailing_mean = 0.0;  // over the last 100 episodes
  double epsilon = 0.0;
  double alpha = 0.0;
};

struct TrainResult {
  QTable table;
  std::vector<CurvePoint> curve;
};

// One episode is one full game of the simulated player. Each move has two
// decision points and therefore two backups. Deterministic given the seed.
TrainResult Train(const TrainOptions& opts);

// Explicit finite MDP used as a dynamic-programming oracle.
struct MdpOutcome {
  double prob = 1.0;
  double reward = 0.0;
  int next = -1;  // -1 = terminal
};

struct FiniteMdp {
  int initial = 0;
  std::vector<std::array<std::vector<MdpOutcome>, kNumActions>> outcomes;
  std::vector<std::string> labels;

  int num_states() const { return static_cast<int>(outcomes.size()); }
};

struct ValueIterationResult {
  ActionValues q;
  std::vector<AssistAction> policy;
  int iterations = 0;
};

// Bellman backups to a fixed point (max change < tol). Throws
// std::runtime_error if `max_iterations` is exceeded.
ValueIterationResult ValueIterate(const FiniteMdp& mdp, double gamma,
                                  double tol = 1e-12, int max_iterations = 100000);

// Q-learning on a FiniteMdp with the same selection and update rules as
// Train. `visits` (optional) receives per-state visit counts.
ActionValues QLearnFinite(const FiniteMdp& mdp, int episodes,
                          const Schedule& sched, double gamma, uint64_t seed,
                          std::vector<int64_t>* visits = nullptr);

// Two-pair (2x2 board) game with a deterministic perfect-memory player who
// always follows hints, rewarded with RewardFirst / RewardSecond.
// Exhaustively enumerated.
FiniteMdp BuildTwoPairEnv(const RewardParams& rewards = {});

}  // namespace memassist

#endif  // MEMASSIST_QLEARN_H_
