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

// Batch play of simulated users, optionally assisted by a trained policy.

#ifndef MEMASSIST_SIMULATION_H_
#define MEMASSIST_SIMULATION_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "memassist/assisted_game.h"
#include "memassist/player.h"
#include "memassist/qlearn.h"

namespace memassist {

struct GameRecord {
  int game_index = 0;
  uint64_t seed = 0;
  int moves = 0;
  int flips = 0;
  int matches = 0;
  bool completed = false;
  int64_t duration_ms = 0;
  int decisions = 0;
  double assistance_sum = 0.0;
  SuggestionCounts suggestions;
  std::string assistance_sequence;  // one letter per decision: N C R K

  // Summed assistance weight per flip (0 when unassisted, at most 2).
  double normalized_assistance() const {
    return flips > 0 ? assistance_sum / flips : 0.0;
  }
  double follow_rate() const {
    return suggestions.offered > 0
               ? static_cast<double>(suggestions.followed) / suggestions.offered
               : 0.0;
  }
  double match_rate() const {
    return suggestions.offered > 0
               ? static_cast<double>(suggestions.led_to_match) / suggestions.offered
               : 0.0;
  }

  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

char ActionCode(AssistAction a);
AssistAction ActionFromCode(char c);

struct SimulationOptions {
  PlayerSpec player;
  const QTable* policy = nullptr;  // null -> unassisted
  AssistMode mode = AssistMode::kToM;
  int window = 0;
  const TemplateSet* templates = nullptr;
  RewardParams rewards;
  MdpState initial_state = kInitialState;
  int n_games = 1;
  uint64_t seed = 0;
  int max_moves = 500;
  int threads = 1;
};

// Snapshot of a (possibly unfinished) game; game_index and duration are left
// at zero.
GameRecord RecordOf(const AssistedGame& game);

// Per-game streams: board, player and assistant each get their own seed
// derived from (seed, game_index).
struct GameSeeds {
  uint64_t board;
  uint64_t player;
  uint64_t assistant;
};
GameSeeds SeedsFor(uint64_t seed, int game_index);

// Chooses the assistance level at a decision point.
using ActionChooser = std::function<AssistAction(const MdpState&)>;
// Receives every transition as it happens.
using TransitionSink = std::function<void(const Transition&)>;

// Plays one game to completion or `max_moves`. With a null chooser the game
// is unassisted.
GameRecord RunEpisode(AssistedGame& game, Player& player,
                      const ActionChooser& choose, const TransitionSink& sink,
                      int max_moves);

GameRecord PlayGame(const SimulationOptions& opts, int game_index);

// Results are ordered by game index regardless of thread count.
std::vector<GameRecord> Simulate(const SimulationOptions& opts);

}  // namespace memassist

#endif  // MEMASSIST_SIMULATION_H_
