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

// Mentalising layer.
//
// Turns an abstract assistance level chosen by the policy into a concrete
// hint grounded in what the user has already flipped, with an explanation
// of why that card was chosen. In NoToM mode first-card hints are drawn at
// random and nothing is explained.

#ifndef MEMASSIST_MENTALISING_H_
#define MEMASSIST_MENTALISING_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "memassist/assist_mdp.h"
#include "memassist/game.h"
#include "memassist/rng.h"

namespace memassist {

enum class AssistMode { kToM, kNoToM };
std::string_view ToString(AssistMode m);
AssistMode ModeFromString(std::string_view s);

enum class MoveClass { kZeroUnknown, kOneUnknown, kTwoUnknown };

enum class ExplanationCase {
  // First card.
  kBothSeenOnce,
  kOneNeverOtherMulti,
  kBothMulti,
  kOneMultiOtherNever,
  // Second card.
  kBothSeenOnce2,
  kOneMultiOtherNever2,
  kBothMulti2,
  kCurrentOnceOtherNever2,
  // No usable history.
  kFallback,
};
inline constexpr int kNumExplanationCases = 9;

std::string_view ToString(ExplanationCase c);
ExplanationCase CaseFromString(std::string_view s);

// What the user has flipped so far. A pure fold over the game ledger.
class HistoryStats {
 public:
  static HistoryStats FromLedger(const std::vector<FlipRecord>& ledger);

  void Observe(const FlipRecord& flip);

  int flip_count(Location loc) const { return locs_[loc.index()].flip_count; }
  bool Seen(Location loc) const { return flip_count(loc) > 0; }
  int last_seen_move(Location loc) const {
    return locs_[loc.index()].last_seen_move;
  }
  int last_seen_seq(Location loc) const { return locs_[loc.index()].last_seen_seq; }
  // Seen locations of `face`, in index order.
  std::vector<Location> LocationsOf(CardFace face) const;
  bool Removed(CardFace face) const { return removed_[face.id]; }
  int FaceFlipCount(CardFace face) const;

  bool empty() const { return total_flips_ == 0; }
  int total_flips() const { return total_flips_; }
  int current_move() const { return current_move_; }

  friend bool operator==(const HistoryStats&, const HistoryStats&) = default;

 private:
  struct LocationHistory {
    int flip_count = 0;
    int last_seen_move = 0;
    int last_seen_seq = 0;
    int face = -1;
    friend bool operator==(const LocationHistory&, const LocationHistory&) = default;
  };

  std::array<LocationHistory, kCells> locs_{};
  std::array<bool, kPairs> removed_{};
  int total_flips_ = 0;
  int current_move_ = 0;
};

// `before` must not yet include the move's two flips.
MoveClass ClassifyMove(const HistoryStats& before, const FlipRecord& first,
                       const FlipRecord& second);

// Most-flipped face among unmatched faces seen in the last `window` moves
// (0 = whole game). Ties go to the most recently flipped face.
std::optional<CardFace> InferTargetFace(const HistoryStats& stats, int window = 0);

struct Hint {
  AssistAction action = AssistAction::kNoHelp;
  DecisionPoint decision_point = DecisionPoint::kFirstFlip;
  AssistMode mode = AssistMode::kToM;
  HintTarget target;
  std::optional<CardFace> face;
  std::optional<ExplanationCase> explanation_case;
  std::optional<std::string> explanation;
  std::string phrase;  // bare instruction; empty for NoHelp

  bool offered() const { return action != AssistAction::kNoHelp; }
};

nlohmann::json HintToJson(const Hint& h);

// Explanation templates keyed by case. Placeholders: {face}, {row}, {col}
// (1-based), {location} ("row 2", "col 3", "row 2 and col 3") and
// {location_ordinal} ("third row").
class TemplateSet {
 public:
  static const TemplateSet& Default();
  // Every case must be present and non-empty.
  static TemplateSet FromJson(const nlohmann::json& j);
  static TemplateSet Load(const std::string& path);
  nlohmann::json ToJson() const;

  const std::string& Get(ExplanationCase c) const {
    return templates_[static_cast<int>(c)];
  }

  // Throws std::invalid_argument if the template needs a face or a target
  // that is not supplied.
  std::string Render(ExplanationCase c, std::optional<CardFace> face,
                     const HintTarget& target) const;

 private:
  std::array<std::string, kNumExplanationCases> templates_;
};

std::string RenderExplanation(ExplanationCase c, std::optional<CardFace> face,
                              const HintTarget& target);

struct MentalisingOptions {
  AssistMode mode = AssistMode::kToM;
  int window = 0;
  const TemplateSet* templates = nullptr;  // null -> TemplateSet::Default()
};

// Hint before the first flip. `rng` is used for NoToM draws and the
// empty-history fallback.
Hint OperationalizeFirst(AssistAction action, const HistoryStats& stats,
                         const GameState& state, const MentalisingOptions& opts,
                         Rng& rng);

// Hint before the second flip. Always points at the true partner of the
// face-up card. `stats` already includes the first flip of this move.
Hint OperationalizeSecond(AssistAction action, const FlipRecord& first_card,
                          const HistoryStats& stats, const GameState& state,
                          const MentalisingOptions& opts);

// FCorrect if the flipped card's partner had already been revealed, or the
// flip landed inside an offered hint; otherwise FWrong. `before` excludes
// `flip`.
PrevOutcome FirstFlipOutcome(const Hint& hint, const FlipRecord& flip,
                             const HistoryStats& before, const GameState& state);

}  // namespace memassist

#endif  // MEMASSIST_MENTALISING_H_
