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

// Simulated users.
//
// PerfectPlayer never forgets and plays the greedy strategy: take a known
// pair if there is one, otherwise turn an unexplored card and then its
// partner if known, else another unexplored card.
//
// ImperfectPlayer has a decaying memory. A remembered card is recalled with
// probability (1-d)^k, k being the flips since it was last seen. After the
// first card is up, the chance of picking its partner is
//
//   1 / (NP - NM)                          partner never seen
//   min(1, P_seen(partner) * NF / (NP-NM)) partner seen before
//
// and a followed hint raises it by 1/6 (row), 1/4 (column) or to 1 (card).

#ifndef MEMASSIST_PLAYER_H_
#define MEMASSIST_PLAYER_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>

#include "json.hpp"
#include "memassist/game.h"
#include "memassist/rng.h"

namespace memassist {

enum class PlayerKind { kPerfect, kImperfect };

// kRecency: exponent is flips since the card was last seen.
// kLiteral: exponent is the total flip count NF, the same for every card.
enum class DecayMode { kRecency, kLiteral };

// kAdditive: p + 1/k. kRescale: p + (1 - p) / k. Both clamped to [0, 1].
enum class HintModifier { kAdditive, kRescale };

// Calibrated so that the unassisted imperfect player averages about 48
// moves per game; see tools/calibrate_player.cc.
inline constexpr double kDefaultDecay = 0.165;
inline constexpr double kDefaultExplore = 0.1;

struct PlayerSpec {
  PlayerKind kind = PlayerKind::kImperfect;
  double d = kDefaultDecay;
  double p_explore = kDefaultExplore;
  double compliance = 1.0;
  DecayMode decay_mode = DecayMode::kRecency;
  HintModifier hint_modifier = HintModifier::kAdditive;

  static PlayerSpec Perfect() {
    PlayerSpec s;
    s.kind = PlayerKind::kPerfect;
    s.d = 0.0;
    return s;
  }

  void Validate() const;
  friend bool operator==(const PlayerSpec&, const PlayerSpec&) = default;
};

nlohmann::json PlayerSpecToJson(const PlayerSpec& s);
PlayerSpec PlayerSpecFromJson(const nlohmann::json& j);

struct MemoryRecord {
  CardFace face;
  int last_seen_flip = 0;  // NF right after the card was seen
};

class MemoryModel {
 public:
  explicit MemoryModel(double d = 0.0, DecayMode mode = DecayMode::kRecency)
      : d_(d), mode_(mode) {}

  void Observe(const FlipRecord& flip);
  const std::optional<MemoryRecord>& Recall(Location loc) const {
    return records_[loc.index()];
  }
  bool Seen(Location loc) const { return records_[loc.index()].has_value(); }

  // (1-d)^k for a remembered card given the current total flip count; 0 for
  // a card never seen.
  double PSeen(Location loc, int nf_total) const;

  double decay() const { return d_; }

 private:
  double d_;
  DecayMode mode_;
  std::array<std::optional<MemoryRecord>, kCells> records_{};
};

struct MatchProbability {
  enum class Provenance { kNotSeen, kSeen, kHintRow, kHintCol, kHintCard };

  double p = 0.0;
  Provenance provenance = Provenance::kNotSeen;
};

// Probability that the second flip hits the partner of the face-up card.
// A hint only modifies the probability when its target contains the partner.
// Requires a card to be face up (throws std::logic_error otherwise).
MatchProbability ComputeMatchProbability(
    const MemoryModel& memory, const GameState& state,
    const HintTarget& hint = HintTarget::None(),
    HintModifier modifier = HintModifier::kAdditive);

class Player {
 public:
  virtual ~Player() = default;

  virtual Location ChooseFirst(const GameState& state,
                               const HintTarget& hint) = 0;
  virtual Location ChooseSecond(const GameState& state,
                                const HintTarget& hint) = 0;
  virtual void Observe(const FlipRecord& flip) = 0;
};

class PerfectPlayer : public Player {
 public:
  explicit PerfectPlayer(uint64_t seed) : rng_(seed) {}

  // Hints are ignored.
  Location ChooseFirst(const GameState& state, const HintTarget& hint) override;
  Location ChooseSecond(const GameState& state, const HintTarget& hint) override;
  void Observe(const FlipRecord& flip) override { memory_.Observe(flip); }

  const MemoryModel& memory() const { return memory_; }

 private:
  Location RandomUnexplored(const GameState& state);

  Rng rng_;
  MemoryModel memory_;
};

class ImperfectPlayer : public Player {
 public:
  ImperfectPlayer(const PlayerSpec& spec, uint64_t seed);

  Location ChooseFirst(const GameState& state, const HintTarget& hint) override;
  Location ChooseSecond(const GameState& state, const HintTarget& hint) override;
  void Observe(const FlipRecord& flip) override { memory_.Observe(flip); }

  const MemoryModel& memory() const { return memory_; }
  const PlayerSpec& spec() const { return spec_; }

 private:
  PlayerSpec spec_;
  Rng rng_;
  MemoryModel memory_;
};

std::unique_ptr<Player> MakePlayer(const PlayerSpec& spec, uint64_t seed);

}  // namespace memassist

#endif  // MEMASSIST_PLAYER_H_
