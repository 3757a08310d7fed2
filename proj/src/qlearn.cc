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

#include "memassist/qlearn.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

namespace memassist {

double ActionValues::MaxValue(int s) const {
  const ActionRow& r = row(s);
  return *std::max_element(r.begin(), r.end());
}

AssistAction GreedyAction(const ActionRow& row) {
  int best = 0;
  for (int a = 1; a < kNumActions; ++a) {
    if (row[a] > row[best]) best = a;
  }
  return static_cast<AssistAction>(best);
}

Schedule Schedule::ForEpisodes(int episodes, double fraction) {
  Schedule s;
  const double horizon = std::max(1.0, fraction * episodes);
  s.epsilon_decay = std::pow(s.epsilon_floor / s.epsilon0, 1.0 / horizon);
  s.alpha_growth = (s.alpha_cap - s.alpha0) / horizon;
  return s;
}

ScheduleValues ScheduleAt(const Schedule& sched, int episode) {
  if (episode < 0) throw std::invalid_argument("episode must be >= 0");
  return ScheduleValues{
      std::max(sched.epsilon_floor,
               sched.epsilon0 * std::pow(sched.epsilon_decay, episode)),
      std::min(sched.alpha_cap, sched.alpha0 + sched.alpha_growth * episode)};
}

nlohmann::json ScheduleToJson(const Schedule& s) {
  return {{"epsilon0", s.epsilon0},       {"epsilon_floor", s.epsilon_floor},
          {"epsilon_decay", s.epsilon_decay}, {"alpha0", s.alpha0},
          {"alpha_cap", s.alpha_cap},     {"alpha_growth", s.alpha_growth}};
}

Schedule ScheduleFromJson(const nlohmann::json& j) {
  Schedule s;
  s.epsilon0 = j.value("epsilon0", s.epsilon0);
  s.epsilon_floor = j.value("epsilon_floor", s.epsilon_floor);
  s.epsilon_decay = j.value("epsilon_decay", s.epsilon_decay);
  s.alpha0 = j.value("alpha0", s.alpha0);
  s.alpha_cap = j.value("alpha_cap", s.alpha_cap);
  s.alpha_growth = j.value("alpha_growth", s.alpha_growth);
  return s;
}

AssistAction SelectAction(const ActionRow& row, double epsilon, Rng& rng) {
  if (rng.Uniform() < epsilon) {
    return static_cast<AssistAction>(rng.Index(kNumActions));
  }
  const double best = *std::max_element(row.begin(), row.end());
  std::array<int, kNumActions> ties{};
  std::size_t n = 0;
  for (int a = 0; a < kNumActions; ++a) {
    if (row[a] == best) ties[n++] = a;
  }
  return static_cast<AssistAction>(n == 1 ? ties[0] : ties[rng.Index(n)]);
}

void Update(ActionValues& q, const Transition& t, double alpha, double gamma) {
  const double future = t.terminal ? 0.0 : q.MaxValue(t.next_state);
  double& cell = q.at(t.state, t.action);
  cell += alpha * (t.reward + gamma * future - cell);
}

nlohmann::json QTableToJson(const QTable& q) {
  const QTableMeta& m = q.meta;
  nlohmann::json meta = {
      {"episodes_trained", m.episodes_trained},
      {"gamma", m.gamma},
      {"schedule", ScheduleToJson(m.schedule)},
      {"seed", m.seed},
      {"rewards", RewardParamsToJson(m.rewards)},
      {"player", PlayerSpecToJson(m.player)},
      {"mode", ToString(m.mode)},
      {"max_moves", m.max_moves},
      {"initial_state", MdpStateToJson(m.initial_state)},
      {"created_at", m.created_at ? nlohmann::json(*m.created_at) : nullptr},
  };
  if (!m.experiment.is_null()) meta["experiment"] = m.experiment;

  nlohmann::json states = nlohmann::json::array();
  for (int i = 0; i < kNumStates; ++i) {
    const MdpState s = Decode(i);
    const ActionRow& r = q.values.row(i);
    states.push_back({{"phase", ToString(s.phase)},
                      {"prev_assist", ToString(s.prev_assist)},
                      {"prev_outcome", ToString(s.prev_outcome)},
                      {"q", {r[0], r[1], r[2], r[3]}},
                      {"visits", q.visits[i]}});
  }
  return {{"schema_version", m.schema_version},
          {"meta", std::move(meta)},
          {"states", std::move(states)}};
}

QTable QTableFromJson(const nlohmann::json& j) {
  const int version = j.at("schema_version").get<int>();
  if (version != kQTableSchemaVersion) {
    throw std::invalid_argument("unsupported q-table schema_version " +
                                std::to_string(version));
  }
  QTable q;
  QTableMeta& m = q.meta;
  const nlohmann::json& meta = j.at("meta");
  m.schema_version = version;
  m.episodes_trained = meta.value("episodes_trained", int64_t{0});
  m.gamma = meta.value("gamma", 0.8);
  if (meta.contains("schedule")) m.schedule = ScheduleFromJson(meta["schedule"]);
  m.seed = meta.value("seed", uint64_t{0});
  if (meta.contains("rewards")) m.rewards = RewardParamsFromJson(meta["rewards"]);
  if (meta.contains("player")) m.player = PlayerSpecFromJson(meta["player"]);
  m.mode = ModeFromString(meta.value("mode", std::string("tom")));
  m.max_moves = meta.value("max_moves", 0);
  if (meta.contains("initial_state")) {
    m.initial_state = MdpStateFromJson(meta["initial_state"]);
  }
  if (meta.contains("created_at") && meta["created_at"].is_string()) {
    m.created_at = meta["created_at"].get<std::string>();
  }
  if (meta.contains("experiment")) m.experiment = meta["experiment"];

  const auto& states = j.at("states");
  if (states.size() != kNumStates) {
    throw std::invalid_argument("q-table must list exactly 48 states");
  }
  std::array<bool, kNumStates> filled{};
  for (const auto& row : states) {
    const MdpState s{PhaseFromString(row.at("phase").get<std::string>()),
                     ActionFromString(row.at("prev_assist").get<std::string>()),
                     OutcomeFromString(row.at("prev_outcome").get<std::string>())};
    const int idx = Encode(s);
    if (filled[idx]) {
      throw std::invalid_argument("duplicate q-table state " + ToString(s));
    }
    filled[idx] = true;
    const auto& values = row.at("q");
    if (values.size() != kNumActions) {
      throw std::invalid_argument("q row must have 4 values");
    }
    for (int a = 0; a < kNumActions; ++a) {
      if (!values[a].is_number()) {
        throw std::invalid_argument("non-numeric q value in " + ToString(s));
      }
      const double v = values[a].get<double>();
      if (!std::isfinite(v)) {
        throw std::invalid_argument("non-finite q value in " + ToString(s));
      }
      q.values.row(idx)[a] = v;
    }
    q.visits[idx] = row.value("visits", int64_t{0});
  }
  return q;
}

void SaveQTable(const QTable& q, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << QTableToJson(q).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

QTable LoadQTable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return QTableFromJson(nlohmann::json::parse(in));
}

std::array<AssistAction, kNumStates> GreedyPolicy(const QTable& q) {
  std::array<AssistAction, kNumStates> out{};
  for (int i = 0; i < kNumStates; ++i) out[i] = GreedyAction(q.values.row(i));
  return out;
}

ValueIterationResult ValueIterate(const FiniteMdp& mdp, double gamma, double tol,
                                  int max_iterations) {
  ValueIterationResult res{ActionValues(mdp.num_states()), {}, 0};
  for (int it = 1; it <= max_iterations; ++it) {
    double delta = 0.0;
    ActionValues next(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) {
      for (int a = 0; a < kNumActions; ++a) {
        double v = 0.0;
        for (const MdpOutcome& o : mdp.outcomes[s][a]) {
          v += o.prob * (o.reward + (o.next < 0 ? 0.0 : gamma * res.q.MaxValue(o.next)));
        }
        next.row(s)[a] = v;
        delta = std::max(delta, std::abs(v - res.q.row(s)[a]));
      }
    }
    res.q = std::move(next);
    res.iterations = it;
    if (delta < tol) {
      res.policy.reserve(static_cast<std::size_t>(mdp.num_states()));
      for (int s = 0; s < mdp.num_states(); ++s) {
        res.policy.push_back(GreedyAction(res.q.row(s)));
      }
      return res;
    }
  }
  throw std::runtime_error("value iteration did not converge in " +
                           std::to_string(max_iterations) + " iterations");
}

ActionValues QLearnFinite(const FiniteMdp& mdp, int episodes,
                          const Schedule& sched, double gamma, uint64_t seed,
                          std::vector<int64_t>* visits) {
  ActionValues q(mdp.num_states());
  Rng rng(seed);
  if (visits) visits->assign(static_cast<std::size_t>(mdp.num_states()), 0);
  for (int ep = 0; ep < episodes; ++ep) {
    const ScheduleValues sv = ScheduleAt(sched, ep);
    int s = mdp.initial;
    while (s >= 0) {
      if (visits) ++(*visits)[static_cast<std::size_t>(s)];
      const AssistAction a = SelectAction(q.row(s), sv.epsilon, rng);
      const auto& outs = mdp.outcomes[s][static_cast<int>(a)];
      std::vector<double> probs;
      probs.reserve(outs.size());
      for (const auto& o : outs) probs.push_back(o.prob);
      const MdpOutcome& o = outs[outs.size() == 1 ? 0 : rng.Weighted(probs)];
      Transition t{s, a, o.reward, std::max(o.next, 0), o.next < 0,
                   DecisionPoint::kFirstFlip};
      Update(q, t, sv.alpha, gamma);
      s = o.next;
    }
  }
  return q;
}

namespace {

// Two-pair board: cells 0..3 on a 2x2 grid holding faces A B / B A.
constexpr std::array<int, 4> kTwoPairLayout = {0, 1, 1, 0};

int TwoPairPartner(int cell) {
  for (int i = 0; i < 4; ++i) {
    if (i != cell && kTwoPairLayout[i] == kTwoPairLayout[cell]) return i;
  }
  return -1;
}

bool InTwoPairTarget(AssistAction a, int target_cell, int cell) {
  switch (a) {
    case AssistAction::kSugRow:
      return cell / 2 == target_cell / 2;
    case AssistAction::kSugCol:
      return cell % 2 == target_cell % 2;
    case AssistAction::kSugCard:
      return cell == target_cell;
    case AssistAction::kNoHelp:
      break;
  }
  return false;
}

struct TwoPairState {
  int seen = 0;     // bitmask
  int removed = 0;  // bitmask
  int pending = -1;
  int nf = 0;       // flips since last match
  AssistAction prev_assist = AssistAction::kNoHelp;
  PrevOutcome prev_outcome = PrevOutcome::kSCorrect;

  auto key() const {
    return std::make_tuple(seen, removed, pending, nf, static_cast<int>(prev_assist),
                           static_cast<int>(prev_outcome));
  }
};

int Matches(const TwoPairState& s) { return __builtin_popcount(s.removed) / 2; }

bool FaceDown(const TwoPairState& s, int c) {
  return !(s.removed & (1 << c)) && s.pending != c;
}

std::string TwoPairLabel(const TwoPairState& s) {
  return "seen=" + std::to_string(s.seen) + " removed=" + std::to_string(s.removed) +
         " pending=" + std::to_string(s.pending) + " nf=" + std::to_string(s.nf) +
         " " + std::string(ToString(s.prev_assist)) + "/" +
         std::string(ToString(s.prev_outcome));
}

// Deterministic step of the two-pair game under assistance `a`.
MdpOutcome StepTwoPair(const TwoPairState& s, AssistAction a,
                       const RewardParams& rewards, TwoPairState& out) {
  const bool second = s.pending >= 0;
  const int nf = s.nf + 1;
  const GamePhase phase = PhaseOf(Matches(s));

  // Assistant's target cell.
  int target = -1;
  if (a != AssistAction::kNoHelp) {
    if (second) {
      target = TwoPairPartner(s.pending);
    } else {
      for (int c = 0; c < 4 && target < 0; ++c) {
        if (FaceDown(s, c) && !(s.seen & (1 << c)) &&
            (s.seen & (1 << TwoPairPartner(c)))) {
          target = c;
        }
      }
      for (int c = 0; c < 4 && target < 0; ++c) {
        if (FaceDown(s, c) && !(s.seen & (1 << c))) target = c;
      }
      for (int c = 0; c < 4 && target < 0; ++c) {
        if (FaceDown(s, c)) target = c;
      }
    }
  }

  // Player's choice: the greedy perfect-memory preferences, restricted to
  // the hinted cells when the hint covers any face-down card.
  int candidates = 0;
  for (int c = 0; c < 4; ++c) {
    if (FaceDown(s, c) && target >= 0 && InTwoPairTarget(a, target, c)) {
      candidates |= 1 << c;
    }
  }
  if (candidates == 0) {
    for (int c = 0; c < 4; ++c) {
      if (FaceDown(s, c)) candidates |= 1 << c;
    }
  }
  auto allowed = [&](int c) { return (candidates & (1 << c)) != 0; };
  auto seen = [&](int c) { return (s.seen & (1 << c)) != 0; };

  int pick = -1;
  if (second) {
    const int p = TwoPairPartner(s.pending);
    if (allowed(p) && seen(p)) pick = p;
  } else {
    for (int c = 0; c < 4 && pick < 0; ++c) {
      const int p = TwoPairPartner(c);
      if (allowed(c) && seen(c) && seen(p) && FaceDown(s, p)) pick = c;
    }
  }
  for (int c = 0; c < 4 && pick < 0; ++c) {
    if (allowed(c) && !seen(c)) pick = c;
  }
  for (int c = 0; c < 4 && pick < 0; ++c) {
    if (allowed(c)) pick = c;
  }

  out = s;
  out.seen |= 1 << pick;
  out.prev_assist = a;
  MdpOutcome o;
  if (!second) {
    o.reward = RewardFirst(a, nf, rewards);
    const bool followed = target >= 0 && InTwoPairTarget(a, target, pick);
    const bool partner_known = s.seen & (1 << TwoPairPartner(pick));
    out.prev_outcome = followed || partner_known ? PrevOutcome::kFCorrect
                                                 : PrevOutcome::kFWrong;
    out.pending = pick;
    out.nf = nf;
  } else {
    o.reward = RewardSecond(a, nf, phase, rewards);
    const bool match = TwoPairPartner(s.pending) == pick;
    out.prev_outcome = match ? PrevOutcome::kSCorrect : PrevOutcome::kSWrong;
    if (match) {
      out.removed |= (1 << pick) | (1 << s.pending);
      out.nf = 0;
    } else {
      out.nf = nf;
    }
    out.pending = -1;
  }
  o.next = out.removed == 0xF ? -1 : 0;
  return o;
}

}  // namespace

FiniteMdp BuildTwoPairEnv(const RewardParams& rewards) {
  FiniteMdp mdp;
  std::map<decltype(TwoPairState{}.key()), int> index;
  std::vector<TwoPairState> states;

  auto intern = [&](const TwoPairState& s) {
    auto [it, inserted] = index.emplace(s.key(), static_cast<int>(states.size()));
    if (inserted) {
      states.push_back(s);
      mdp.outcomes.emplace_back();
      mdp.labels.push_back(TwoPairLabel(s));
    }
    return it->second;
  };

  mdp.initial = intern(TwoPairState{});
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states.size() > 100000) {
      throw std::logic_error("two-pair environment is not finite");
    }
    for (AssistAction a : kAllActions) {
      TwoPairState next;
      const TwoPairState cur = states[i];
      MdpOutcome o = StepTwoPair(cur, a, rewards, next);
      if (o.next == 0) o.next = intern(next);
      mdp.outcomes[i][static_cast<int>(a)] = {o};
    }
  }
  return mdp;
}

}  // namespace memassist
