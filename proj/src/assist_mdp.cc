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

#include "memassist/assist_mdp.h"

#include <stdexcept>
#include <string>

namespace memassist {
namespace {

constexpr std::array<std::string_view, kNumActions> kActionNames = {
    "no_help", "sug_col", "sug_row", "sug_card"};
constexpr std::array<std::string_view, kNumPhases> kPhaseNames = {
    "begin", "middle", "end"};
constexpr std::array<std::string_view, kNumOutcomes> kOutcomeNames = {
    "f_correct", "f_wrong", "s_correct", "s_wrong"};

template <typename Enum, std::size_t N>
Enum Lookup(const std::array<std::string_view, N>& names, std::string_view s,
            const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  throw std::invalid_argument(std::string("unknown ") + what + ": " +
                              std::string(s));
}

void CheckNf(int nf) {
  if (nf < 1) {
    throw std::invalid_argument("nf must be >= 1, got " + std::to_string(nf));
  }
}

}  // namespace

std::string_view ToString(AssistAction a) {
  return kActionNames[static_cast<int>(a)];
}
std::string_view ToString(GamePhase p) { return kPhaseNames[static_cast<int>(p)]; }
std::string_view ToString(PrevOutcome o) {
  return kOutcomeNames[static_cast<int>(o)];
}
std::string_view ToString(DecisionPoint d) {
  return d == DecisionPoint::kFirstFlip ? "first_flip" : "second_flip";
}

AssistAction ActionFromString(std::string_view s) {
  return Lookup<AssistAction>(kActionNames, s, "action");
}
GamePhase PhaseFromString(std::string_view s) {
  return Lookup<GamePhase>(kPhaseNames, s, "phase");
}
PrevOutcome OutcomeFromString(std::string_view s) {
  return Lookup<PrevOutcome>(kOutcomeNames, s, "outcome");
}

double AssistanceWeight(AssistAction a) {
  switch (a) {
    case AssistAction::kNoHelp:
      return 0.0;
    case AssistAction::kSugCol:
      return 0.5;
    case AssistAction::kSugRow:
      return 1.0;
    case AssistAction::kSugCard:
      return 2.0;
  }
  return 0.0;
}

std::string ToString(const MdpState& s) {
  return std::string(ToString(s.phase)) + "/" +
         std::string(ToString(s.prev_assist)) + "/" +
         std::string(ToString(s.prev_outcome));
}

MdpState Decode(int index) {
  if (index < 0 || index >= kNumStates) {
    throw std::out_of_range("state index out of range: " + std::to_string(index));
  }
  MdpState s;
  s.prev_outcome = static_cast<PrevOutcome>(index % kNumOutcomes);
  index /= kNumOutcomes;
  s.prev_assist = static_cast<AssistAction>(index % kNumActions);
  s.phase = static_cast<GamePhase>(index / kNumActions);
  return s;
}

GamePhase PhaseOf(int matches) {
  if (matches < 0 || matches > 11) {
    throw std::out_of_range("matches outside 0..11: " + std::to_string(matches));
  }
  if (matches < 4) return GamePhase::kBegin;
  if (matches < 8) return GamePhase::kMiddle;
  return GamePhase::kEnd;
}

void RewardParams::Validate() const {
  for (double v : a_hat) {
    if (!(v > 0.0)) throw std::invalid_argument("a_hat values must be > 0");
  }
  for (double v : gs_hat) {
    if (!(v > 0.0)) throw std::invalid_argument("gs_hat values must be > 0");
  }
  for (int i = 1; i < kNumActions; ++i) {
    if (a_hat[i] > a_hat[0]) {
      throw std::invalid_argument("a_hat[no_help] must be the maximum");
    }
  }
}

nlohmann::json RewardParamsToJson(const RewardParams& p) {
  nlohmann::json a, g;
  for (int i = 0; i < kNumActions; ++i) a[std::string(kActionNames[i])] = p.a_hat[i];
  for (int i = 0; i < kNumPhases; ++i) g[std::string(kPhaseNames[i])] = p.gs_hat[i];
  return {{"a_hat", a}, {"gs_hat", g}};
}

nlohmann::json MdpStateToJson(const MdpState& s) {
  return {{"phase", ToString(s.phase)},
          {"prev_assist", ToString(s.prev_assist)},
          {"prev_outcome", ToString(s.prev_outcome)}};
}

MdpState MdpStateFromJson(const nlohmann::json& j) {
  return {PhaseFromString(j.at("phase").get<std::string>()),
          ActionFromString(j.at("prev_assist").get<std::string>()),
          OutcomeFromString(j.at("prev_outcome").get<std::string>())};
}

RewardParams RewardParamsFromJson(const nlohmann::json& j) {
  RewardParams p;
  if (j.contains("a_hat")) {
    for (int i = 0; i < kNumActions; ++i) {
      p.a_hat[i] = j["a_hat"].value(std::string(kActionNames[i]), p.a_hat[i]);
    }
  }
  if (j.contains("gs_hat")) {
    for (int i = 0; i < kNumPhases; ++i) {
      p.gs_hat[i] = j["gs_hat"].value(std::string(kPhaseNames[i]), p.gs_hat[i]);
    }
  }
  p.Validate();
  return p;
}

double RewardFirst(AssistAction action, int nf, const RewardParams& params) {
  CheckNf(nf);
  return params.action_value(action) / nf;
}

double RewardSecond(AssistAction action, int nf, GamePhase phase,
                    const RewardParams& params) {
  CheckNf(nf);
  const double scale = nf * params.phase_value(phase);
  if (action == AssistAction::kNoHelp) {
    return params.action_value(action) / scale;
  }
  return params.action_value(action) * scale;
}

}  // namespace memassist
