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

#include "memassist/game.h"

#include <istream>
#include <ostream>
#include <string>
#include <utility>

#include "memassist/rng.h"

namespace memassist {
namespace {

constexpr std::array<std::string_view, kPairs> kFaceNames = {
    "shark", "octopus", "turtle",  "dolphin",   "crab",  "starfish",
    "whale", "seahorse", "jellyfish", "penguin", "seal", "clownfish"};

void CheckLayout(const std::array<int, kCells>& layout) {
  std::array<int, kPairs> count{};
  for (int f : layout) {
    if (f < 0 || f >= kPairs) {
      throw std::invalid_argument("layout face id out of range");
    }
    ++count[f];
  }
  for (int c : count) {
    if (c != 2) throw std::invalid_argument("each face must appear twice");
  }
}

}  // namespace

std::string ToString(Location loc) {
  return "(" + std::to_string(loc.row) + "," + std::to_string(loc.col) + ")";
}

std::string_view CardFace::name() const {
  if (id < 0 || id >= kPairs) return "unknown";
  return kFaceNames[id];
}

bool HintTarget::Contains(Location loc) const {
  switch (kind) {
    case Kind::kNone:
      return false;
    case Kind::kRow:
      return loc.row == index;
    case Kind::kCol:
      return loc.col == index;
    case Kind::kCell:
      return loc == cell;
  }
  return false;
}

GameState GameState::New(uint64_t seed) {
  std::array<int, kCells> layout{};
  for (int i = 0; i < kCells; ++i) layout[i] = i / 2;
  Rng rng(seed);
  for (int i = kCells - 1; i > 0; --i) {
    std::swap(layout[i], layout[rng.Index(static_cast<std::size_t>(i) + 1)]);
  }
  return FromLayout(layout, seed);
}

GameState GameState::FromLayout(const std::array<int, kCells>& layout,
                                uint64_t seed) {
  CheckLayout(layout);
  GameState s;
  s.layout_ = layout;
  s.status_.fill(CardStatus::kFaceDown);
  s.seed_ = seed;
  return s;
}

GameState GameState::Replay(uint64_t seed,
                            const std::vector<FlipRecord>& ledger) {
  GameState s = New(seed);
  for (const FlipRecord& want : ledger) {
    FlipOutcome got = s.Flip(want.location);
    if (!(got.record == want)) {
      throw std::runtime_error("ledger disagrees with replayed game at flip " +
                               std::to_string(s.flips()));
    }
  }
  return s;
}

FlipOutcome GameState::Flip(Location loc) {
  if (!loc.InGrid()) {
    throw FlipNotAllowed("location " + ToString(loc) + " is outside the grid");
  }
  CardStatus& st = status_[loc.index()];
  if (st == CardStatus::kRemoved) {
    throw FlipNotAllowed("card at " + ToString(loc) + " is already removed");
  }
  if (st == CardStatus::kFaceUpPending) {
    throw FlipNotAllowed("card at " + ToString(loc) + " is already face up");
  }

  FlipOutcome out;
  out.revealed_face = CardFace{layout_[loc.index()]};
  out.record.move_index = flips() / 2 + 1;
  out.record.location = loc;
  out.record.face = out.revealed_face;
  ++nf_since_match_;

  if (!pending_) {
    st = CardStatus::kFaceUpPending;
    pending_ = loc;
    out.record.flip_in_move = 1;
  } else {
    const Location first = *pending_;
    out.is_second_flip = true;
    out.record.flip_in_move = 2;
    pending_.reset();
    if (layout_[first.index()] == layout_[loc.index()]) {
      status_[first.index()] = CardStatus::kRemoved;
      st = CardStatus::kRemoved;
      ++matches_;
      nf_since_match_ = 0;
      out.produced_match = true;
    } else {
      status_[first.index()] = CardStatus::kFaceDown;
    }
    out.record.produced_match = out.produced_match;
  }
  ledger_.push_back(out.record);
  return out;
}

CardFace GameState::FaceAt(Location loc) const {
  return CardFace{layout_.at(static_cast<std::size_t>(loc.index()))};
}

CardStatus GameState::StatusAt(Location loc) const {
  return status_.at(static_cast<std::size_t>(loc.index()));
}

Location GameState::PartnerOf(Location loc) const {
  const int face = layout_.at(static_cast<std::size_t>(loc.index()));
  for (int i = 0; i < kCells; ++i) {
    if (i != loc.index() && layout_[i] == face) return Location::FromIndex(i);
  }
  throw std::logic_error("layout has no partner for " + ToString(loc));
}

std::vector<Location> GameState::FaceDownLocations() const {
  std::vector<Location> out;
  out.reserve(kCells);
  for (int i = 0; i < kCells; ++i) {
    if (status_[i] == CardStatus::kFaceDown) out.push_back(Location::FromIndex(i));
  }
  return out;
}

GameSummary Summarize(const GameState& state, int64_t duration_ms) {
  return GameSummary{state.completed_moves(), state.flips(), state.matches(),
                     duration_ms};
}

nlohmann::json LocationToJson(Location loc) {
  return {{"row", loc.row}, {"col", loc.col}};
}

Location LocationFromJson(const nlohmann::json& j) {
  return Location{j.at("row").get<int>(), j.at("col").get<int>()};
}

nlohmann::json FlipRecordToJson(const FlipRecord& r) {
  nlohmann::json j = {{"move_index", r.move_index},
                      {"flip_in_move", r.flip_in_move},
                      {"location", LocationToJson(r.location)},
                      {"face", r.face.id}};
  if (r.flip_in_move == 2) j["produced_match"] = r.produced_match;
  return j;
}

FlipRecord FlipRecordFromJson(const nlohmann::json& j) {
  FlipRecord r;
  r.move_index = j.at("move_index").get<int>();
  r.flip_in_move = j.at("flip_in_move").get<int>();
  r.location = LocationFromJson(j.at("location"));
  r.face = CardFace{j.at("face").get<int>()};
  r.produced_match = j.value("produced_match", false);
  return r;
}

nlohmann::json LayoutToJson(const GameState& state) {
  nlohmann::json grid = nlohmann::json::array();
  for (int r = 0; r < kRows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < kCols; ++c) row.push_back(state.layout()[r * kCols + c]);
    grid.push_back(std::move(row));
  }
  return {{"seed", state.seed()}, {"grid", std::move(grid)}};
}

std::array<int, kCells> LayoutFromJson(const nlohmann::json& j) {
  const auto& grid = j.at("grid");
  if (grid.size() != kRows) throw std::invalid_argument("grid must have 4 rows");
  std::array<int, kCells> layout{};
  for (int r = 0; r < kRows; ++r) {
    if (grid[r].size() != kCols) {
      throw std::invalid_argument("grid rows must have 6 columns");
    }
    for (int c = 0; c < kCols; ++c) layout[r * kCols + c] = grid[r][c].get<int>();
  }
  CheckLayout(layout);
  return layout;
}

nlohmann::json HintTargetToJson(const HintTarget& t) {
  switch (t.kind) {
    case HintTarget::Kind::kNone:
      return nullptr;
    case HintTarget::Kind::kRow:
      return {{"kind", "row"}, {"index", t.index}};
    case HintTarget::Kind::kCol:
      return {{"kind", "col"}, {"index", t.index}};
    case HintTarget::Kind::kCell:
      return {{"kind", "cell"}, {"row", t.cell.row}, {"col", t.cell.col}};
  }
  return nullptr;
}

HintTarget HintTargetFromJson(const nlohmann::json& j) {
  if (j.is_null()) return HintTarget::None();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "row") return HintTarget::Row(j.at("index").get<int>());
  if (kind == "col") return HintTarget::Col(j.at("index").get<int>());
  if (kind == "cell") {
    return HintTarget::Cell({j.at("row").get<int>(), j.at("col").get<int>()});
  }
  throw std::invalid_argument("unknown hint target kind: " + kind);
}

void WriteLedgerJsonl(std::ostream& out, const std::vector<FlipRecord>& ledger) {
  for (const FlipRecord& r : ledger) out << FlipRecordToJson(r).dump() << '\n';
}

std::vector<FlipRecord> ReadLedgerJsonl(std::istream& in) {
  std::vector<FlipRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(FlipRecordFromJson(nlohmann::json::parse(line)));
  }
  return out;
}

}  // namespace memassist
