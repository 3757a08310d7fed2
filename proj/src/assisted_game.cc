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

#include "memassist/assisted_game.h"

#include <utility>

namespace memassist {

AssistedGame::AssistedGame(GameState game, uint64_t assistant_seed,
                           const AssistedGameOptions& opts)
    : game_(std::move(game)),
      rng_(assistant_seed),
      opts_(opts),
      state_(opts.initial_state),
      history_(HistoryStats::FromLedger(game_.ledger())) {}

const Hint& AssistedGame::Offer(AssistAction action) {
  const MentalisingOptions mopts{opts_.mode, opts_.window, opts_.templates};
  if (decision_point() == DecisionPoint::kFirstFlip) {
    hint_ = OperationalizeFirst(action, history_, game_, mopts, rng_);
  } else {
    hint_ = OperationalizeSecond(action, game_.ledger().back(), history_, game_,
                                 mopts);
  }
  return *hint_;
}

StepResult AssistedGame::Flip(Location loc) {
  const DecisionPoint dp = decision_point();
  const int nf = game_.nf_since_match() + 1;
  const MdpState before = state_;

  StepResult res;
  res.flip = game_.Flip(loc);

  const FlipRecord& rec = res.flip.record;
  const PrevOutcome outcome =
      dp == DecisionPoint::kFirstFlip
          ? FirstFlipOutcome(hint_.value_or(Hint{}), rec, history_, game_)
          : (res.flip.produced_match ? PrevOutcome::kSCorrect
                                     : PrevOutcome::kSWrong);
  history_.Observe(rec);
  res.game_over = game_.complete();

  if (dp == DecisionPoint::kFirstFlip) followed_this_move_ = 0;

  if (hint_) {
    const Hint& h = *hint_;
    actions_.push_back(h.action);
    assistance_sum_ += AssistanceWeight(h.action);
    if (h.offered()) {
      ++suggestions_.offered;
      if (h.target.Contains(loc)) {
        ++suggestions_.followed;
        ++followed_this_move_;
        res.hint_followed = true;
      }
    }

    Transition t;
    t.state = Encode(before);
    t.action = h.action;
    t.decision_point = dp;
    t.reward = dp == DecisionPoint::kFirstFlip
                   ? RewardFirst(h.action, nf, opts_.rewards)
                   : RewardSecond(h.action, nf, before.phase, opts_.rewards);
    const GamePhase phase =
        res.game_over ? GamePhase::kEnd : PhaseOf(game_.matches());
    state_ = MdpState{phase, h.action, outcome};
    t.next_state = Encode(state_);
    t.terminal = res.game_over;
    res.transition = t;
  } else {
    const GamePhase phase =
        res.game_over ? GamePhase::kEnd : PhaseOf(game_.matches());
    state_ = MdpState{phase, AssistAction::kNoHelp, outcome};
  }

  if (dp == DecisionPoint::kSecondFlip && res.flip.produced_match) {
    suggestions_.led_to_match += followed_this_move_;
  }
  hint_.reset();
  return res;
}

}  // namespace memassist
