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

// Rules engine for the 24-card Concentration game.
//
// The board is 4 rows x 6 columns holding 12 faces twice each. A "flip" is a
// single card reveal and a "move" is two flips. A mismatched pair goes back
// face down immediately; any display delay is the client's business.

#ifndef MEMASSIST_GAME_H_
#define MEMASSIST_GAME_H_

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace memassist {

inline constexpr int kRows = 4;
inline constexpr int kCols = 6;
inline constexpr int kCells = kRows * kCols;
inline constexpr int kPairs = kCells / 2;

struct Location {
  int row = 0;
  int col = 0;

  constexpr int index() const { return row * kCols + col; }
  constexpr bool InGrid() const {
    return row >= 0 && row < kRows && col >= 0 && col < kCols;
  }
  static constexpr Location FromIndex(int i) {
    return Location{i / kCols, i % kCols};
  }
  friend constexpr auto operator<=>(const Location&, const Location&) = default;
};

std::string ToString(Location loc);

struct CardFace {
  int id = 0;

  std::string_view name() const;
  friend constexpr auto operator<=>(const CardFace&, const CardFace&) = default;
};

enum class CardStatus { kFaceDown, kFaceUpPending, kRemoved };

struct FlipRecord {
  int move_index = 1;   // 1-based, advances every two flips
  int flip_in_move = 1; // 1 or 2
  Location location;
  CardFace face;
  bool produced_match = false;  // only meaningful when flip_in_move == 2

  friend bool operator==(const FlipRecord&, const FlipRecord&) = default;
};

class FlipNotAllowed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlipOutcome {
  CardFace revealed_face;
  bool is_second_flip = false;
  bool produced_match = false;
  FlipRecord record;
};

// Region of the board an assistive hint points at.
struct HintTarget {
  enum class Kind { kNone, kRow, kCol, kCell };

  Kind kind = Kind::kNone;
  int index = 0;  // row or column for kRow / kCol
  Location cell;  // for kCell

  static HintTarget None() { return {}; }
  static HintTarget Row(int r) { return {Kind::kRow, r, {}}; }
  static HintTarget Col(int c) { return {Kind::kCol, c, {}}; }
  static HintTarget Cell(Location l) { return {Kind::kCell, 0, l}; }

  bool empty() const { return kind == Kind::kNone; }
  bool Contains(Location loc) const;

  friend bool operator==(const HintTarget&, const HintTarget&) = default;
};

struct GameSummary {
  int moves = 0;
  int flips = 0;
  int matches = 0;
  int64_t duration_ms = 0;
};

class GameState {
 public:
  // Seeded uniform shuffle of the 24-card deck; all cards face down.
  static GameState New(uint64_t seed);

  // Board with an explicit layout (face id per cell index). Used by replay
  // and tests; throws std::invalid_argument unless each face 0..11 appears
  // exactly twice.
  static GameState FromLayout(const std::array<int, kCells>& layout,
                              uint64_t seed = 0);

  // Rebuilds a state by re-applying every flip in `ledger`. Throws if the
  // ledger does not agree with the board produced by `seed`.
  static GameState Replay(uint64_t seed, const std::vector<FlipRecord>& ledger);

  FlipOutcome Flip(Location loc);

  CardFace FaceAt(Location loc) const;
  CardStatus StatusAt(Location loc) const;
  Location PartnerOf(Location loc) const;
  std::vector<Location> FaceDownLocations() const;
  std::optional<Location> pending() const { return pending_; }

  int matches() const { return matches_; }
  int flips() const { return static_cast<int>(ledger_.size()); }
  int completed_moves() const { return flips() / 2; }
  int nf_since_match() const { return nf_since_match_; }
  bool complete() const { return matches_ == kPairs; }
  bool awaiting_second_flip() const { return pending_.has_value(); }
  uint64_t seed() const { return seed_; }
  const std::array<int, kCells>& layout() const { return layout_; }
  const std::vector<FlipRecord>& ledger() const { return ledger_; }

  friend bool operator==(const GameState&, const GameState&) = default;

 private:
  GameState() = default;

  std::array<int, kCells> layout_{};
  std::array<CardStatus, kCells> status_{};
  std::optional<Location> pending_;
  int matches_ = 0;
  int nf_since_match_ = 0;
  std::vector<FlipRecord> ledger_;
  uint64_t seed_ = 0;
};

GameSummary Summarize(const GameState& state, int64_t duration_ms = 0);

// JSON encodings: golden layouts {seed, grid} and JSONL ledgers.
nlohmann::json LocationToJson(Location loc);
Location LocationFromJson(const nlohmann::json& j);
nlohmann::json FlipRecordToJson(const FlipRecord& r);
FlipRecord FlipRecordFromJson(const nlohmann::json& j);
nlohmann::json LayoutToJson(const GameState& state);
std::array<int, kCells> LayoutFromJson(const nlohmann::json& j);
nlohmann::json HintTargetToJson(const HintTarget& t);
HintTarget HintTargetFromJson(const nlohmann::json& j);
void WriteLedgerJsonl(std::ostream& out, const std::vector<FlipRecord>& ledger);
std::vector<FlipRecord> ReadLedgerJsonl(std::istream& in);

}  // namespace memassist

#endif  // MEMASSIST_GAME_H_
