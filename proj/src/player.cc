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

#include "memassist/player.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace memassist {
namespace {

template <typename T>
const T& Pick(const std::vector<T>& v, Rng& rng) {
  return v[rng.Index(v.size())];
}

std::vector<Location> FaceDownWhere(const GameState& state, auto&& pred) {
  std::vector<Location> out;
  for (Location l : state.FaceDownLocations()) {
    if (pred(l)) out.push_back(l);
  }
  return out;
}

double ApplyModifier(double p, double k, HintModifier m) {
  const double raised = m == HintModifier::kAdditive ? p + 1.0 / k
                                                     : p + (1.0 - p) / k;
  return std::clamp(raised, 0.0, 1.0);
}

}  // namespace

void PlayerSpec::Validate() const {
  if (!(d >= 0.0 && d < 1.0)) throw std::invalid_argument("d must be in [0,1)");
  if (!(p_explore >= 0.0 && p_explore <= 1.0)) {
    throw std::invalid_argument("p_explore must be in [0,1]");
  }
  if (!(compliance >= 0.0 && compliance <= 1.0)) {
    throw std::invalid_argument("compliance must be in [0,1]");
  }
}

nlohmann::json PlayerSpecToJson(const PlayerSpec& s) {
  return {{"kind", s.kind == PlayerKind::kPerfect ? "perfect" : "imperfect"},
          {"d", s.d},
          {"p_explore", s.p_explore},
          {"compliance", s.compliance},
          {"decay_mode", s.decay_mode == DecayMode::kRecency ? "recency" : "literal"},
          {"hint_modifier",
           s.hint_modifier == HintModifier::kAdditive ? "additive" : "rescale"}};
}

PlayerSpec PlayerSpecFromJson(const nlohmann::json& j) {
  PlayerSpec s;
  const std::string kind = j.value("kind", std::string("imperfect"));
  if (kind == "perfect") {
    s = PlayerSpec::Perfect();
  } else if (kind != "imperfect") {
    throw std::invalid_argument("unknown player kind: " + kind);
  }
  s.d = j.value("d", s.d);
  s.p_explore = j.value("p_explore", s.p_explore);
  s.compliance = j.value("compliance", s.compliance);
  const std::string decay = j.value("decay_mode", std::string("recency"));
  if (decay == "recency") {
    s.decay_mode = DecayMode::kRecency;
  } else if (decay == "literal") {
    s.decay_mode = DecayMode::kLiteral;
  } else {
    throw std::invalid_argument("unknown decay_mode: " + decay);
  }
  const std::string mod = j.value("hint_modifier", std::string("additive"));
  if (mod == "additive") {
    s.hint_modifier = HintModifier::kAdditive;
  } else if (mod == "rescale") {
    s.hint_modifier = HintModifier::kRescale;
  } else {
    throw std::invalid_argument("unknown hint_modifier: " + mod);
  }
  s.Validate();
  return s;
}

void MemoryModel::Observe(const FlipRecord& flip) {
  const int nf = (flip.move_index - 1) * 2 + flip.flip_in_move;
  records_[flip.location.index()] = MemoryRecord{flip.face, nf};
}

double MemoryModel::PSeen(Location loc, int nf_total) const {
  const auto& rec = records_[loc.index()];
  if (!rec) return 0.0;
  const int exponent =
      mode_ == DecayMode::kRecency ? nf_total - rec->last_seen_flip : nf_total;
  return std::pow(1.0 - d_, std::max(exponent, 0));
}

MatchProbability ComputeMatchProbability(const MemoryModel& memory,
                                         const GameState& state,
                                         const HintTarget& hint,
                                         HintModifier modifier) {
  if (!state.pending()) {
    throw std::logic_error("match probability needs a face-up first card");
  }
  const Location partner = state.PartnerOf(*state.pending());
  const double remaining = kPairs - state.matches();

  MatchProbability mp;
  if (memory.Seen(partner)) {
    const int nf = state.flips();
    mp.p = std::min(1.0, memory.PSeen(partner, nf) * nf / remaining);
    mp.provenance = MatchProbability::Provenance::kSeen;
  } else {
    mp.p = 1.0 / remaining;
    mp.provenance = MatchProbability::Provenance::kNotSeen;
  }

  if (!hint.Contains(partner)) return mp;
  switch (hint.kind) {
    case HintTarget::Kind::kRow:
      mp.p = ApplyModifier(mp.p, kCols, modifier);
      mp.provenance = MatchProbability::Provenance::kHintRow;
      break;
    case HintTarget::Kind::kCol:
      mp.p = ApplyModifier(mp.p, kRows, modifier);
      mp.provenance = MatchProbability::Provenance::kHintCol;
      break;
    case HintTarget::Kind::kCell:
      mp.p = 1.0;
      mp.provenance = MatchProbability::Provenance::kHintCard;
      break;
    case HintTarget::Kind::kNone:
      break;
  }
  return mp;
}

Location PerfectPlayer::RandomUnexplored(const GameState& state) {
  auto fresh = FaceDownWhere(state, [&](Location l) { return !memory_.Seen(l); });
  if (!fresh.empty()) return Pick(fresh, rng_);
  return Pick(state.FaceDownLocations(), rng_);
}

Location PerfectPlayer::ChooseFirst(const GameState& state, const HintTarget&) {
  std::array<int, kPairs> first_known;
  first_known.fill(-1);
  for (Location l : state.FaceDownLocations()) {
    const auto& rec = memory_.Recall(l);
    if (!rec) continue;
    if (first_known[rec->face.id] >= 0) {
      return Location::FromIndex(first_known[rec->face.id]);
    }
    first_known[rec->face.id] = l.index();
  }
  return RandomUnexplored(state);
}

Location PerfectPlayer::ChooseSecond(const GameState& state, const HintTarget&) {
  const Location first = *state.pending();
  const CardFace face = state.FaceAt(first);
  for (Location l : state.FaceDownLocations()) {
    const auto& rec = memory_.Recall(l);
    if (rec && rec->face == face) return l;
  }
  return RandomUnexplored(state);
}

ImperfectPlayer::ImperfectPlayer(const PlayerSpec& spec, uint64_t seed)
    : spec_(spec), rng_(seed), memory_(spec.d, spec.decay_mode) {
  spec_.Validate();
}

Location ImperfectPlayer::ChooseFirst(const GameState& state,
                                      const HintTarget& hint) {
  if (!hint.empty() && rng_.Bernoulli(spec_.compliance)) {
    auto in_target = FaceDownWhere(state, [&](Location l) { return hint.Contains(l); });
    if (!in_target.empty()) return Pick(in_target, rng_);
  }

  auto fresh = FaceDownWhere(state, [&](Location l) { return !memory_.Seen(l); });
  auto seen = FaceDownWhere(state, [&](Location l) { return memory_.Seen(l); });
  if (!fresh.empty() && (seen.empty() || rng_.Bernoulli(spec_.p_explore))) {
    return Pick(fresh, rng_);
  }
  std::vector<double> weights;
  weights.reserve(seen.size());
  for (Location l : seen) weights.push_back(memory_.PSeen(l, state.flips()));
  return seen[rng_.Weighted(weights)];
}

Location ImperfectPlayer::ChooseSecond(const GameState& state,
                                       const HintTarget& hint) {
  const Location partner = state.PartnerOf(*state.pending());
  const bool follow = !hint.empty() && rng_.Bernoulli(spec_.compliance);
  const HintTarget used = follow ? hint : HintTarget::None();

  const MatchProbability mp =
      ComputeMatchProbability(memory_, state, used, spec_.hint_modifier);
  if (rng_.Bernoulli(mp.p)) return partner;

  auto others = FaceDownWhere(state, [&](Location l) { return l != partner; });
  if (follow) {
    auto in_line = FaceDownWhere(
        state, [&](Location l) { return l != partner && used.Contains(l); });
    if (!in_line.empty()) return Pick(in_line, rng_);
    if (used.Contains(partner)) return partner;
  }
  if (others.empty()) return partner;
  return Pick(others, rng_);
}

std::unique_ptr<Player> MakePlayer(const PlayerSpec& spec, uint64_t seed) {
  if (spec.kind == PlayerKind::kPerfect) {
    return std::make_unique<PerfectPlayer>(seed);
  }
  return std::make_unique<ImperfectPlayer>(spec, seed);
}

}  // namespace memassist
