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

// A game with the two-layer assistant attached.
//
// Training, batch simulation and live sessions all drive the same object:
// at each decision point the caller picks an assistance level and calls
// Offer(), then applies the user's flip with Flip(). The object keeps the
// abstract MDP state, the user's flip history, the rewards and the
// suggestion counters.

#ifndef MEMASSIST_ASSISTED_GAME_H_
#define MEMASSIST_ASSISTED_GAME_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "memassist/assist_mdp.h"
#include "memassist/game.h"
#include "memassist/mentalising.h"
#include "memassist/qlearn.h"
#include "memassist/rng.h"

namespace memassist {

struct AssistedGameOptions {
  AssistMode mode = AssistMode::kToM;
  int window = 0;
  const TemplateSet* templates = nullptr;
  RewardParams rewards;
  MdpState initial_state = kInitialState;
};

struct SuggestionCounts {
  int offered = 0;
  int followed = 0;
  int led_to_match = 0;

  friend bool operator==(const SuggestionCounts&, const SuggestionCounts&) = default;
};

struct StepResult {
  FlipOutcome flip;
  // Set when an action was offered for this flip.
  std::optional<Transition> transition;
  bool hint_followed = false;
  bool game_over = false;
};

class AssistedGame {
 public:
  AssistedGame(GameState game, uint64_t assistant_seed,
               const AssistedGameOptions& opts = {});

  DecisionPoint decision_point() const {
    return game_.awaiting_second_flip() ? DecisionPoint::kSecondFlip
                                        : DecisionPoint::kFirstFlip;
  }
  const MdpState& mdp_state() const { return state_; }
  const GameState& game() const { return game_; }
  const HistoryStats& history() const { return history_; }
  const std::optional<Hint>& current_hint() const { return hint_; }

  // Operationalises `action` for the current decision point. Replaces any
  // hint already offered for this flip.
  const Hint& Offer(AssistAction action);

  // Applies the user's flip. Without a prior Offer() the flip is treated as
  // unassisted and no transition is produced. Throws FlipNotAllowed and
  // leaves everything unchanged on an illegal flip.
  StepResult Flip(Location loc);

  const std::vector<AssistAction>& actions() const { return actions_; }
  const SuggestionCounts& suggestions() const { return suggestions_; }
  double assistance_sum() const { return assistance_sum_; }
  int decisions() const { return static_cast<int>(actions_.size()); }

 private:
  GameState game_;
  Rng rng_;
  AssistedGameOptions opts_;
  MdpState state_;
  HistoryStats history_;
  std::optional<Hint> hint_;
  int followed_this_move_ = 0;

  std::vector<AssistAction> actions_;
  SuggestionCounts suggestions_;
  double assistance_sum_ = 0.0;
};

}  // namespace memassist

#endif  // MEMASSIST_ASSISTED_GAME_H_
