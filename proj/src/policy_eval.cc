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

#include "memassist/policy_eval.h"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace memassist {
namespace {

std::string Fmt(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

double BestAssistive(const ActionRow& row) {
  return std::max({row[1], row[2], row[3]});
}

PolicyCheck CheckEndSuccess(const QTable& q, const PolicyReport& r) {
  PolicyCheck c{kCheckEndSuccessNoHelp, true, {}};
  for (AssistAction prev : kAllActions) {
    const MdpState s{GamePhase::kEnd, prev, PrevOutcome::kSCorrect};
    const int i = Encode(s);
    if (!r.visited[i]) {
      c.pass = false;
      c.diagnostics.push_back(ToString(s) + " was never visited");
      continue;
    }
    const ActionRow& row = q.values.row(i);
    if (!(row[0] > BestAssistive(row))) {
      c.pass = false;
      c.diagnostics.push_back(Fmt("%s prefers %s (no_help %.4f, best assistive %.4f)",
                                  ToString(s).c_str(),
                                  std::string(ToString(GreedyAction(row))).c_str(),
                                  row[0], BestAssistive(row)));
    }
  }
  return c;
}

PolicyCheck CheckBeginFailure(const QTable& q, const PolicyReport& r) {
  PolicyCheck c{kCheckBeginFailureAssistive, true, {}};
  int seen = 0;
  for (AssistAction prev : kAllActions) {
    if (prev == AssistAction::kNoHelp) continue;
    const MdpState s{GamePhase::kBegin, prev, PrevOutcome::kSWrong};
    const int i = Encode(s);
    if (!r.visited[i]) continue;
    ++seen;
    const ActionRow& row = q.values.row(i);
    if (!(BestAssistive(row) > row[0])) {
      c.pass = false;
      c.diagnostics.push_back(Fmt("%s prefers no_help (no_help %.4f, best assistive %.4f)",
                                  ToString(s).c_str(), row[0], BestAssistive(row)));
    }
  }
  if (seen == 0) {
    c.pass = false;
    c.diagnostics.push_back("no (begin, assistive, s_wrong) state was visited");
  }
  return c;
}

PolicyCheck CheckSecondFlipMass(PolicyReport& r) {
  PolicyCheck c{kCheckSecondFlipMoreAssistance, true, {}};
  double sum[2] = {0, 0};
  int n[2] = {0, 0};
  for (int i = 0; i < kNumStates; ++i) {
    if (!r.visited[i]) continue;
    const int k = IsSecondFlipContext(Decode(i)) ? 1 : 0;
    sum[k] += AssistanceWeight(r.greedy[i]);
    ++n[k];
  }
  r.first_flip_weight = n[0] > 0 ? sum[0] / n[0] : 0.0;
  r.second_flip_weight = n[1] > 0 ? sum[1] / n[1] : 0.0;
  if (n[0] == 0 || n[1] == 0) {
    c.pass = false;
    c.diagnostics.push_back("no visited states in one of the two contexts");
    return c;
  }
  if (!(r.second_flip_weight > r.first_flip_weight)) {
    c.pass = false;
    c.diagnostics.push_back(Fmt("second-flip mean weight %.4f <= first-flip mean weight %.4f",
                                r.second_flip_weight, r.first_flip_weight));
  }
  return c;
}

}  // namespace

bool PolicyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const PolicyCheck& c) { return c.pass; });
}

const PolicyCheck& PolicyReport::check(const std::string& name) const {
  for (const PolicyCheck& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no policy check named " + name);
}

PolicyReport EvaluatePolicy(const QTable& q) {
  PolicyReport r;
  r.greedy = GreedyPolicy(q);
  for (int i = 0; i < kNumStates; ++i) r.visited[i] = q.visits[i] > 0;
  r.checks.push_back(CheckEndSuccess(q, r));
  r.checks.push_back(CheckBeginFailure(q, r));
  r.checks.push_back(CheckSecondFlipMass(r));
  return r;
}

std::string FormatPolicyGrid(const PolicyReport& r) {
  std::string out = Fmt("%-20s", "phase/prev_assist");
  for (int o = 0; o < kNumOutcomes; ++o) {
    out += Fmt(" %-10s", std::string(ToString(static_cast<PrevOutcome>(o))).c_str());
  }
  out += '\n';
  for (int p = 0; p < kNumPhases; ++p) {
    for (AssistAction a : kAllActions) {
      const std::string label = std::string(ToString(static_cast<GamePhase>(p))) + "/" +
                                std::string(ToString(a));
      out += Fmt("%-20s", label.c_str());
      for (int o = 0; o < kNumOutcomes; ++o) {
        const int i = Encode({static_cast<GamePhase>(p), a, static_cast<PrevOutcome>(o)});
        const std::string cell = r.visited[i] ? std::string(ToString(r.greedy[i])) : "-";
        out += Fmt(" %-10s", cell.c_str());
      }
      out += '\n';
    }
  }
  return out;
}

std::string FormatPolicyChecks(const PolicyReport& r) {
  std::string out;
  for (const PolicyCheck& c : r.checks) {
    out += (c.pass ? "PASS " : "FAIL ") + c.name + '\n';
    for (const std::string& d : c.diagnostics) out += "  " + d + '\n';
  }
  out += Fmt("mean greedy weight: first-flip %.4f, second-flip %.4f\n",
             r.first_flip_weight, r.second_flip_weight);
  return out;
}

nlohmann::json PolicyReportToJson(const PolicyReport& r) {
  nlohmann::json states = nlohmann::json::array();
  for (int i = 0; i < kNumStates; ++i) {
    nlohmann::json s = MdpStateToJson(Decode(i));
    s["greedy"] = ToString(r.greedy[i]);
    s["visited"] = r.visited[i];
    states.push_back(std::move(s));
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const PolicyCheck& c : r.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"diagnostics", c.diagnostics}});
  }
  return {{"states", std::move(states)},
          {"first_flip_weight", r.first_flip_weight},
          {"second_flip_weight", r.second_flip_weight},
          {"checks", std::move(checks)},
          {"all_pass", r.all_pass()}};
}

}  // namespace memassist
