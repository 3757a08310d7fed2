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

// Qualitative checks on a trained Q-table's greedy policy.

#ifndef MEMASSIST_POLICY_EVAL_H_
#define MEMASSIST_POLICY_EVAL_H_

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "memassist/assist_mdp.h"
#include "memassist/qlearn.h"

namespace memassist {

struct PolicyCheck {
  std::string name;
  bool pass = false;
  std::vector<std::string> diagnostics;
};

inline constexpr char kCheckEndSuccessNoHelp[] = "end_success_no_help";
inline constexpr char kCheckBeginFailureAssistive[] = "begin_failure_assistive";
inline constexpr char kCheckSecondFlipMoreAssistance[] = "second_flip_more_assistance";

struct PolicyReport {
  std::array<AssistAction, kNumStates> greedy{};
  std::array<bool, kNumStates> visited{};
  // Mean greedy assistance weight over visited states of each context.
  double first_flip_weight = 0.0;
  double second_flip_weight = 0.0;
  std::vector<PolicyCheck> checks;

  bool all_pass() const;
  const PolicyCheck& check(const std::string& name) const;
};

// Only visited states (visits > 0) take part in the checks:
//  - every (End, *, SCorrect) state strictly prefers NoHelp;
//  - every visited (Begin, assistive, SWrong) state strictly prefers some
//    assistive action, and at least one such state was visited;
//  - the mean greedy weight over second-flip contexts exceeds that over
//    first-flip contexts.
PolicyReport EvaluatePolicy(const QTable& q);

// Greedy action grid, one row per (phase, previous assistance) and one
// column per previous outcome. Unvisited states print as "-".
std::string FormatPolicyGrid(const PolicyReport& r);
std::string FormatPolicyChecks(const PolicyReport& r);
nlohmann::json PolicyReportToJson(const PolicyReport& r);

}  // namespace memassist

#endif  // MEMASSIST_POLICY_EVAL_H_
