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

#include "memassist/mentalising.h"

#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace memassist {
namespace {

constexpr std::array<std::string_view, kNumExplanationCases> kCaseNames = {
    "both_seen_once",      "one_never_other_multi", "both_multi",
    "one_multi_other_never", "both_seen_once_2",    "one_multi_other_never_2",
    "both_multi_2",        "current_once_other_never_2", "fallback"};

constexpr std::array<std::string_view, 6> kOrdinals = {
    "first", "second", "third", "fourth", "fifth", "sixth"};

// Wording follows the examples the robot used in the study, with the
// location phrase lifted into {location} so the same case works for row,
// column and card hints.
const std::array<std::string, kNumExplanationCases> kDefaultTemplates = {
    "You have seen both locations of {face} once. Let me refresh your memory: "
    "{location}.",
    "You have clicked {face} several times. Click the one in {location}, you "
    "should then remember where the other one is located.",
    "You have often seen both locations of {face}. The one less visited is "
    "located in {location}. In this way, you should make a match!",
    "Are you looking for a particular card? Well, then try {location}. Surely "
    "you remember the other location!",
    "You've seen this card before. I remind you that it is located in "
    "{location}.",
    "This card again? You're struggling on this one. Well, then try "
    "{location}.",
    "You have seen both locations of {face} more than once. Try to remember at "
    "what location of {location} the other card is located.",
    "You haven't seen a {face} before, so let me help you: try the "
    "{location_ordinal}.",
    "Let me give you a hand. Why don't you try {location}?",
};

std::string LocationPhrase(const HintTarget& t) {
  switch (t.kind) {
    case HintTarget::Kind::kRow:
      return "row " + std::to_string(t.index + 1);
    case HintTarget::Kind::kCol:
      return "col " + std::to_string(t.index + 1);
    case HintTarget::Kind::kCell:
      return "row " + std::to_string(t.cell.row + 1) + " and col " +
             std::to_string(t.cell.col + 1);
    case HintTarget::Kind::kNone:
      break;
  }
  throw std::invalid_argument("hint target required");
}

std::string OrdinalPhrase(const HintTarget& t) {
  switch (t.kind) {
    case HintTarget::Kind::kRow:
      return std::string(kOrdinals[t.index]) + " row";
    case HintTarget::Kind::kCol:
      return std::string(kOrdinals[t.index]) + " column";
    case HintTarget::Kind::kCell:
      return std::string(kOrdinals[t.cell.row]) + " row, " +
             std::string(kOrdinals[t.cell.col]) + " column";
    case HintTarget::Kind::kNone:
      break;
  }
  throw std::invalid_argument("hint target required");
}

HintTarget TargetFor(AssistAction action, Location cell) {
  switch (action) {
    case AssistAction::kSugRow:
      return HintTarget::Row(cell.row);
    case AssistAction::kSugCol:
      return HintTarget::Col(cell.col);
    case AssistAction::kSugCard:
      return HintTarget::Cell(cell);
    case AssistAction::kNoHelp:
      break;
  }
  return HintTarget::None();
}

void ReplaceAll(std::string& s, std::string_view key, const std::string& value) {
  for (std::size_t pos = s.find(key); pos != std::string::npos;
       pos = s.find(key, pos + value.size())) {
    s.replace(pos, key.size(), value);
  }
}

const TemplateSet& TemplatesOf(const MentalisingOptions& opts) {
  return opts.templates ? *opts.templates : TemplateSet::Default();
}

// Less-flipped location first; ties go to the one seen less recently.
Location LessVisited(const HistoryStats& stats, Location a, Location b) {
  if (stats.flip_count(a) != stats.flip_count(b)) {
    return stats.flip_count(a) < stats.flip_count(b) ? a : b;
  }
  return stats.last_seen_seq(a) <= stats.last_seen_seq(b) ? a : b;
}

ExplanationCase FirstCardCase(int target_count, int other_count) {
  if (target_count == 0) {
    return other_count >= 2 ? ExplanationCase::kOneNeverOtherMulti
                            : ExplanationCase::kOneMultiOtherNever;
  }
  if (target_count == 1 && other_count == 1) return ExplanationCase::kBothSeenOnce;
  return ExplanationCase::kBothMulti;
}

// `current_prior` counts visits to the face-up card before this flip.
ExplanationCase SecondCardCase(int current_prior, int partner_count) {
  if (partner_count == 0) {
    return current_prior == 0 ? ExplanationCase::kCurrentOnceOtherNever2
                              : ExplanationCase::kOneMultiOtherNever2;
  }
  if (partner_count >= 2 && current_prior >= 1) return ExplanationCase::kBothMulti2;
  return ExplanationCase::kBothSeenOnce2;
}

}  // namespace

std::string_view ToString(AssistMode m) {
  return m == AssistMode::kToM ? "tom" : "notom";
}

AssistMode ModeFromString(std::string_view s) {
  if (s == "tom") return AssistMode::kToM;
  if (s == "notom") return AssistMode::kNoToM;
  throw std::invalid_argument("unknown mode: " + std::string(s));
}

std::string_view ToString(ExplanationCase c) {
  return kCaseNames[static_cast<int>(c)];
}

ExplanationCase CaseFromString(std::string_view s) {
  for (int i = 0; i < kNumExplanationCases; ++i) {
    if (kCaseNames[i] == s) return static_cast<ExplanationCase>(i);
  }
  throw std::invalid_argument("unknown explanation case: " + std::string(s));
}

HistoryStats HistoryStats::FromLedger(const std::vector<FlipRecord>& ledger) {
  HistoryStats stats;
  for (const FlipRecord& r : ledger) stats.Observe(r);
  return stats;
}

void HistoryStats::Observe(const FlipRecord& flip) {
  LocationHistory& h = locs_[flip.location.index()];
  ++total_flips_;
  current_move_ = flip.move_index;
  ++h.flip_count;
  h.last_seen_move = flip.move_index;
  h.last_seen_seq = total_flips_;
  h.face = flip.face.id;
  if (flip.flip_in_move == 2 && flip.produced_match) removed_[flip.face.id] = true;
}

std::vector<Location> HistoryStats::LocationsOf(CardFace face) const {
  std::vector<Location> out;
  for (int i = 0; i < kCells; ++i) {
    if (locs_[i].face == face.id) out.push_back(Location::FromIndex(i));
  }
  return out;
}

int HistoryStats::FaceFlipCount(CardFace face) const {
  int n = 0;
  for (const auto& h : locs_) {
    if (h.face == face.id) n += h.flip_count;
  }
  return n;
}

MoveClass ClassifyMove(const HistoryStats& before, const FlipRecord& first,
                       const FlipRecord& second) {
  const int known = (before.Seen(first.location) ? 1 : 0) +
                    (before.Seen(second.location) ? 1 : 0);
  switch (known) {
    case 2:
      return MoveClass::kZeroUnknown;
    case 1:
      return MoveClass::kOneUnknown;
    default:
      return MoveClass::kTwoUnknown;
  }
}

std::optional<CardFace> InferTargetFace(const HistoryStats& stats, int window) {
  std::optional<CardFace> best;
  int best_count = 0;
  int best_seq = 0;
  for (int f = 0; f < kPairs; ++f) {
    const CardFace face{f};
    if (stats.Removed(face)) continue;
    const auto locs = stats.LocationsOf(face);
    if (locs.empty()) continue;
    int latest_move = 0;
    int latest_seq = 0;
    for (Location l : locs) {
      latest_move = std::max(latest_move, stats.last_seen_move(l));
      latest_seq = std::max(latest_seq, stats.last_seen_seq(l));
    }
    if (window > 0 && latest_move <= stats.current_move() - window) continue;
    const int count = stats.FaceFlipCount(face);
    if (!best || count > best_count ||
        (count == best_count && latest_seq > best_seq)) {
      best = face;
      best_count = count;
      best_seq = latest_seq;
    }
  }
  return best;
}

nlohmann::json HintToJson(const Hint& h) {
  nlohmann::json j = {{"action", ToString(h.action)},
                      {"decision_point", ToString(h.decision_point)},
                      {"mode", ToString(h.mode)},
                      {"target", HintTargetToJson(h.target)},
                      {"phrase", h.phrase}};
  if (h.explanation_case) j["case"] = ToString(*h.explanation_case);
  if (h.explanation) j["explanation"] = *h.explanation;
  return j;
}

const TemplateSet& TemplateSet::Default() {
  static const TemplateSet kDefault = [] {
    TemplateSet t;
    t.templates_ = kDefaultTemplates;
    return t;
  }();
  return kDefault;
}

TemplateSet TemplateSet::FromJson(const nlohmann::json& j) {
  TemplateSet t;
  for (int i = 0; i < kNumExplanationCases; ++i) {
    const std::string key(kCaseNames[i]);
    if (!j.contains(key) || !j[key].is_string() ||
        j[key].get<std::string>().empty()) {
      throw std::invalid_argument("template missing or empty for case " + key);
    }
    t.templates_[i] = j[key].get<std::string>();
  }
  return t;
}

TemplateSet TemplateSet::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open template file " + path);
  return FromJson(nlohmann::json::parse(in));
}

nlohmann::json TemplateSet::ToJson() const {
  nlohmann::json j;
  for (int i = 0; i < kNumExplanationCases; ++i) {
    j[std::string(kCaseNames[i])] = templates_[i];
  }
  return j;
}

std::string TemplateSet::Render(ExplanationCase c, std::optional<CardFace> face,
                                const HintTarget& target) const {
  std::string out = Get(c);
  const bool needs_face = out.find("{face}") != std::string::npos;
  if (needs_face && !face) {
    throw std::invalid_argument("template " + std::string(ToString(c)) +
                                " needs a face");
  }
  if (target.empty()) {
    throw std::invalid_argument("template " + std::string(ToString(c)) +
                                " needs a target");
  }
  std::optional<int> row, col;
  if (target.kind == HintTarget::Kind::kCell) {
    row = target.cell.row;
    col = target.cell.col;
  } else if (target.kind == HintTarget::Kind::kRow) {
    row = target.index;
  } else {
    col = target.index;
  }
  const auto fill = [&](std::string_view key, std::optional<int> v) {
    if (out.find(key) == std::string::npos) return;
    if (!v) {
      throw std::invalid_argument("template " + std::string(ToString(c)) +
                                  " uses " + std::string(key) +
                                  " which this target does not define");
    }
    ReplaceAll(out, key, std::to_string(*v + 1));
  };
  if (needs_face) ReplaceAll(out, "{face}", std::string(face->name()));
  ReplaceAll(out, "{location_ordinal}", OrdinalPhrase(target));
  ReplaceAll(out, "{location}", LocationPhrase(target));
  fill("{row}", row);
  fill("{col}", col);
  return out;
}

std::string RenderExplanation(ExplanationCase c, std::optional<CardFace> face,
                              const HintTarget& target) {
  return TemplateSet::Default().Render(c, face, target);
}

Hint OperationalizeFirst(AssistAction action, const HistoryStats& stats,
                         const GameState& state, const MentalisingOptions& opts,
                         Rng& rng) {
  Hint hint;
  hint.action = action;
  hint.decision_point = DecisionPoint::kFirstFlip;
  hint.mode = opts.mode;
  if (action == AssistAction::kNoHelp) return hint;

  std::optional<CardFace> face;
  if (opts.mode == AssistMode::kToM) face = InferTargetFace(stats, opts.window);

  Location cell;
  if (face) {
    const auto seen = stats.LocationsOf(*face);
    // Both cells of the face; the unseen or less-visited one is suggested.
    Location a = seen.front();
    Location b = state.PartnerOf(a);
    cell = LessVisited(stats, a, b);
    if (!stats.Seen(b)) cell = b;
    const Location other = cell == a ? b : a;
    hint.face = face;
    hint.explanation_case =
        FirstCardCase(stats.flip_count(cell), stats.flip_count(other));
  } else {
    const auto candidates = state.FaceDownLocations();
    cell = candidates[rng.Index(candidates.size())];
    if (opts.mode == AssistMode::kToM) {
      hint.explanation_case = ExplanationCase::kFallback;
    }
  }
  hint.target = TargetFor(action, cell);

  switch (action) {
    case AssistAction::kSugRow:
      hint.phrase = "Try to flip a card in row " + std::to_string(cell.row + 1) + ".";
      break;
    case AssistAction::kSugCol:
      hint.phrase = "Try to flip a card in col " + std::to_string(cell.col + 1) + ".";
      break;
    default:
      hint.phrase = "Try to flip the card in row " + std::to_string(cell.row + 1) +
                    " col " + std::to_string(cell.col + 1) + ".";
      break;
  }
  if (hint.explanation_case) {
    hint.explanation =
        TemplatesOf(opts).Render(*hint.explanation_case, hint.face, hint.target);
  }
  return hint;
}

Hint OperationalizeSecond(AssistAction action, const FlipRecord& first_card,
                          const HistoryStats& stats, const GameState& state,
                          const MentalisingOptions& opts) {
  Hint hint;
  hint.action = action;
  hint.decision_point = DecisionPoint::kSecondFlip;
  hint.mode = opts.mode;
  if (action == AssistAction::kNoHelp) return hint;

  const Location partner = state.PartnerOf(first_card.location);
  hint.target = TargetFor(action, partner);
  hint.phrase = "The matching card is located in " + LocationPhrase(hint.target) + ".";
  if (opts.mode == AssistMode::kToM) {
    hint.face = first_card.face;
    hint.explanation_case = SecondCardCase(
        stats.flip_count(first_card.location) - 1, stats.flip_count(partner));
    hint.explanation =
        TemplatesOf(opts).Render(*hint.explanation_case, hint.face, hint.target);
  }
  return hint;
}

PrevOutcome FirstFlipOutcome(const Hint& hint, const FlipRecord& flip,
                             const HistoryStats& before, const GameState& state) {
  if (hint.offered() && hint.target.Contains(flip.location)) {
    return PrevOutcome::kFCorrect;
  }
  return before.Seen(state.PartnerOf(flip.location)) ? PrevOutcome::kFCorrect
                                                     : PrevOutcome::kFWrong;
}

}  // namespace memassist
