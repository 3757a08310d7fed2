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

// Decision space of the assistant: 48 abstract states (game phase x previous
// assistance x previous outcome), 4 assistance levels, and the two reward
// functions used before the first flip and before the second flip.

#ifndef MEMASSIST_ASSIST_MDP_H_
#define MEMASSIST_ASSIST_MDP_H_

#include <array>
#include <compare>
#include <string>
#include <string_view>

#include "json.hpp"

namespace memassist {

enum class AssistAction { kNoHelp = 0, kSugCol = 1, kSugRow = 2, kSugCard = 3 };
enum class GamePhase { kBegin = 0, kMiddle = 1, kEnd = 2 };
enum class PrevOutcome { kFCorrect = 0, kFWrong = 1, kSCorrect = 2, kSWrong = 3 };
enum class DecisionPoint { kFirstFlip, kSecondFlip };

inline constexpr int kNumActions = 4;
inline constexpr int kNumPhases = 3;
inline constexpr int kNumOutcomes = 4;
inline constexpr int kNumStates = kNumPhases * kNumActions * kNumOutcomes;

inline constexpr std::array<AssistAction, kNumActions> kAllActions = {
    AssistAction::kNoHelp, AssistAction::kSugCol, AssistAction::kSugRow,
    AssistAction::kSugCard};

std::string_view ToString(AssistAction a);
std::string_view ToString(GamePhase p);
std::string_view ToString(PrevOutcome o);
std::string_view ToString(DecisionPoint d);
AssistAction ActionFromString(std::string_view s);
GamePhase PhaseFromString(std::string_view s);
PrevOutcome OutcomeFromString(std::string_view s);

// Assistance weight used by the normalized-assistance metric.
double AssistanceWeight(AssistAction a);

struct MdpState {
  GamePhase phase = GamePhase::kBegin;
  AssistAction prev_assist = AssistAction::kNoHelp;
  PrevOutcome prev_outcome = PrevOutcome::kSCorrect;

  friend constexpr auto operator<=>(const MdpState&, const MdpState&) = default;
};

// (Begin, NoHelp, SCorrect): nothing has gone wrong yet.
inline constexpr MdpState kInitialState{};

std::string ToString(const MdpState& s);

// Bijection onto 0..47; phase is the most significant digit.
constexpr int Encode(const MdpState& s) {
  return (static_cast<int>(s.phase) * kNumActions +
          static_cast<int>(s.prev_assist)) *
             kNumOutcomes +
         static_cast<int>(s.prev_outcome);
}
MdpState Decode(int index);

// States whose next decision is the second flip of a move.
constexpr bool IsSecondFlipContext(const MdpState& s) {
  return s.prev_outcome == PrevOutcome::kFCorrect ||
         s.prev_outcome == PrevOutcome::kFWrong;
}

// NM in [0,3] -> Begin, [4,7] -> Middle, [8,11] -> End. Throws
// std::out_of_range outside 0..11.
GamePhase PhaseOf(int matches);

struct RewardParams {
  std::array<double, kNumActions> a_hat = {10.0, 0.2, 0.1, 0.025};
  std::array<double, kNumPhases> gs_hat = {3.0, 2.0, 1.0};

  double action_value(AssistAction a) const {
    return a_hat[static_cast<int>(a)];
  }
  double phase_value(GamePhase p) const { return gs_hat[static_cast<int>(p)]; }

  // Throws std::invalid_argument if any value is non-positive or NoHelp is
  // not the largest action value.
  void Validate() const;

  friend bool operator==(const RewardParams&, const RewardParams&) = default;
};

nlohmann::json RewardParamsToJson(const RewardParams& p);
RewardParams RewardParamsFromJson(const nlohmann::json& j);

// {"phase":..., "prev_assist":..., "prev_outcome":...}
nlohmann::json MdpStateToJson(const MdpState& s);
MdpState MdpStateFromJson(const nlohmann::json& j);

// Reward for the decision taken before the first flip: a_hat / nf.
// `nf` counts flips since the last match including the advised flip, so it
// is 1 right after a match. Throws std::invalid_argument for nf < 1.
double RewardFirst(AssistAction action, int nf, const RewardParams& params);

// Reward for the decision taken before the second flip. No help decays as
// a_hat / (nf * gs_hat); assistance grows as a_hat * (nf * gs_hat).
double RewardSecond(AssistAction action, int nf, GamePhase phase,
                    const RewardParams& params);

}  // namespace memassist

#endif  // MEMASSIST_ASSIST_MDP_H_
