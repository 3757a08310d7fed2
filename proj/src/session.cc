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

#include "memassist/session.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <random>
#include <utility>

namespace memassist {
namespace {

std::string_view StatusName(CardStatus s) {
  switch (s) {
    case CardStatus::kFaceDown:
      return "face_down";
    case CardStatus::kFaceUpPending:
      return "face_up";
    case CardStatus::kRemoved:
      return "removed";
  }
  return "?";
}

AssistedGameOptions GameOptions(AssistMode mode, const QTable& policy,
                                const TemplateSet* templates) {
  AssistedGameOptions o;
  o.mode = mode;
  o.templates = templates;
  o.rewards = policy.meta.rewards;
  o.initial_state = policy.meta.initial_state;
  return o;
}

std::string RandomId() {
  std::random_device rd;
  char buf[33];
  for (int i = 0; i < 4; ++i) std::snprintf(buf + 8 * i, 9, "%08x", rd());
  return buf;
}

uint64_t RandomSeed() {
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) | rd();
}

}  // namespace

int64_t SteadyClock::NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

SessionRequest SessionRequestFromJson(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw SessionError(SessionError::Code::kBadRequest, "request must be an object");
  }
  SessionRequest r;
  try {
    r.condition = ModeFromString(j.at("condition").get<std::string>());
    r.policy = j.at("policy").get<std::string>();
    if (j.contains("seed") && !j["seed"].is_null()) {
      const nlohmann::json& seed = j["seed"];
      if (!seed.is_number_integer() ||
          (!seed.is_number_unsigned() && seed.get<int64_t>() < 0)) {
        throw SessionError(SessionError::Code::kBadRequest,
                           "seed must be a non-negative integer");
      }
      r.seed = j["seed"].get<uint64_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw SessionError(SessionError::Code::kBadRequest, e.what());
  } catch (const std::invalid_argument& e) {
    throw SessionError(SessionError::Code::kBadRequest, e.what());
  }
  return r;
}

nlohmann::json SessionSummaryToJson(const SessionSummary& s) {
  const GameRecord& g = s.record;
  return {{"moves", g.moves},
          {"flips", g.flips},
          {"matches", g.matches},
          {"completed", g.completed},
          {"completion_time_ms", s.completion_time_ms},
          {"normalized_assistance", g.normalized_assistance()},
          {"follow_rate", g.follow_rate()},
          {"match_from_hint_rate", g.match_rate()},
          {"suggestions",
           {{"offered", g.suggestions.offered},
            {"followed", g.suggestions.followed},
            {"led_to_match", g.suggestions.led_to_match}}},
          {"assistance_sequence", g.assistance_sequence}};
}

Session::Session(std::string id, const SessionRequest& request, uint64_t seed,
                 std::shared_ptr<const QTable> policy, Clock* clock,
                 const std::string& log_path, const TemplateSet* templates)
    : id_(std::move(id)),
      condition_(request.condition),
      policy_name_(request.policy),
      seed_(seed),
      policy_(std::move(policy)),
      clock_(clock),
      game_(GameState::New(SeedsFor(seed, 0).board), SeedsFor(seed, 0).assistant,
            GameOptions(request.condition, *policy_, templates)) {
  if (!log_path.empty()) {
    log_file_.open(log_path, std::ios::out | std::ios::trunc);
    if (!log_file_) throw std::runtime_error("cannot open session log " + log_path);
  }
}

nlohmann::json Session::Frame(std::string_view type) const {
  return {{"type", type}, {"schema_version", kWireSchemaVersion}, {"session_id", id_}};
}

nlohmann::json Session::StateSync() const {
  const GameState& g = game_.game();
  nlohmann::json board = nlohmann::json::array();
  for (int i = 0; i < kCells; ++i) {
    const Location loc = Location::FromIndex(i);
    const CardStatus st = g.StatusAt(loc);
    nlohmann::json cell = {{"row", loc.row}, {"col", loc.col}, {"status", StatusName(st)}};
    // Faces of face-down cards never leave the server.
    if (st != CardStatus::kFaceDown) cell["face"] = g.FaceAt(loc).name();
    board.push_back(std::move(cell));
  }
  nlohmann::json f = Frame("state_sync");
  f["condition"] = ToString(condition_);
  f["rows"] = kRows;
  f["cols"] = kCols;
  f["board"] = std::move(board);
  f["moves"] = g.completed_moves();
  f["flips"] = g.flips();
  f["matches"] = g.matches();
  f["complete"] = g.complete();
  f["decision_point"] = ToString(game_.decision_point());
  return f;
}

nlohmann::json Session::OfferNextHint() {
  const AssistAction action = policy_->Greedy(game_.mdp_state());
  const Hint& hint = game_.Offer(action);
  nlohmann::json f = Frame("hint_offer");
  f.update(HintToJson(hint));
  pending_hint_ = f;
  return f;
}

nlohmann::json Session::ErrorFrame(std::string_view code,
                                   const std::string& message) const {
  nlohmann::json f = Frame("error");
  f["code"] = code;
  f["message"] = message;
  return f;
}

void Session::Log(int64_t now, std::string_view dir, const nlohmann::json& frame) {
  const nlohmann::json line = {{"ts_ms", now}, {"dir", dir}, {"frame", frame}};
  log_.push_back(line.dump());
  if (log_file_.is_open()) log_file_ << log_.back() << '\n' << std::flush;
}

Session::Frames Session::Start() {
  std::lock_guard<std::mutex> lock(mu_);
  const int64_t now = clock_->NowMs();
  created_ms_ = now;
  nlohmann::json created = Frame("session_created");
  created["condition"] = ToString(condition_);
  created["policy"] = policy_name_;
  created["seed"] = seed_;
  Frames out = {created, StateSync(), OfferNextHint()};
  for (const auto& f : out) Log(now, "out", f);
  return out;
}

Session::Frames Session::Attach() {
  std::lock_guard<std::mutex> lock(mu_);
  const int64_t now = clock_->NowMs();
  Log(now, "event", {{"type", "attach"}});
  Frames out = {StateSync()};
  if (finished_ms_) {
    nlohmann::json end = Frame("game_end");
    end["summary"] = SessionSummaryToJson(SummaryLocked());
    out.push_back(std::move(end));
  } else if (pending_hint_) {
    out.push_back(*pending_hint_);
  }
  for (const auto& f : out) Log(now, "out", f);
  return out;
}

Session::Frames Session::Handle(const nlohmann::json& frame) {
  std::lock_guard<std::mutex> lock(mu_);
  const int64_t now = clock_->NowMs();
  Log(now, "in", frame);
  Frames out;
  if (!frame.is_object() || !frame.contains("type") || !frame["type"].is_string()) {
    out.push_back(ErrorFrame("bad_frame", "frame must be an object with a string type"));
  } else if (frame["type"] == "flip_request") {
    out = HandleFlip(frame, now);
  } else {
    out.push_back(ErrorFrame("unknown_type",
                             "unsupported frame type " + frame["type"].get<std::string>()));
  }
  for (const auto& f : out) Log(now, "out", f);
  return out;
}

Session::Frames Session::HandleFlip(const nlohmann::json& frame, int64_t now) {
  if (finished_ms_) return {ErrorFrame("game_over", "the game is already complete")};
  Location loc;
  try {
    loc = LocationFromJson(frame.at("location"));
  } catch (const nlohmann::json::exception&) {
    return {ErrorFrame("bad_frame", "flip_request needs location {row, col}")};
  }
  const DecisionPoint dp = game_.decision_point();
  StepResult step;
  try {
    step = game_.Flip(loc);
  } catch (const FlipNotAllowed& e) {
    return {ErrorFrame("flip_not_allowed", e.what())};
  }
  pending_hint_.reset();

  const FlipRecord& rec = step.flip.record;
  nlohmann::json result = Frame("flip_result");
  result["location"] = LocationToJson(rec.location);
  result["face"] = rec.face.name();
  result["decision_point"] = ToString(dp);
  result["move_index"] = rec.move_index;
  result["flip_in_move"] = rec.flip_in_move;
  if (rec.flip_in_move == 2) result["matched"] = rec.produced_match;
  result["hint_followed"] = step.hint_followed;
  result["elapsed_ms"] = now - created_ms_;
  result["moves"] = game_.game().completed_moves();
  result["flips"] = game_.game().flips();
  result["matches"] = game_.game().matches();

  Frames out = {std::move(result)};
  if (step.game_over) {
    finished_ms_ = now;
    nlohmann::json end = Frame("game_end");
    end["summary"] = SessionSummaryToJson(SummaryLocked());
    out.push_back(std::move(end));
  } else {
    out.push_back(OfferNextHint());
  }
  return out;
}

bool Session::finished() const {
  std::lock_guard<std::mutex> lock(mu_);
  return finished_ms_.has_value();
}

SessionSummary Session::SummaryLocked() const {
  SessionSummary s;
  s.record = RecordOf(game_);
  s.completion_time_ms = finished_ms_ ? *finished_ms_ - created_ms_ : 0;
  s.record.duration_ms = s.completion_time_ms;
  return s;
}

SessionSummary Session::Summary() const {
  std::lock_guard<std::mutex> lock(mu_);
  return SummaryLocked();
}

std::vector<std::string> Session::LogLines() const {
  std::lock_guard<std::mutex> lock(mu_);
  return log_;
}

AssistedGame Session::Game() const {
  std::lock_guard<std::mutex> lock(mu_);
  return game_;
}

SessionManager::SessionManager(PolicyCatalog* catalog, SessionManagerOptions opts)
    : catalog_(catalog), opts_(std::move(opts)) {
  if (!opts_.clock) {
    owned_clock_ = std::make_unique<SteadyClock>();
    opts_.clock = owned_clock_.get();
  }
  if (!opts_.make_id) opts_.make_id = RandomId;
  if (!opts_.make_seed) opts_.make_seed = RandomSeed;
  if (!opts_.log_dir.empty()) std::filesystem::create_directories(opts_.log_dir);
}

std::pair<std::shared_ptr<Session>, Session::Frames> SessionManager::Create(
    const SessionRequest& request) {
  auto policy = catalog_->Load(request.policy);
  if (!policy) {
    throw SessionError(SessionError::Code::kUnknownPolicy,
                       "unknown policy: " + request.policy);
  }
  std::lock_guard<std::mutex> lock(mu_);
  std::string id = opts_.make_id();
  while (sessions_.contains(id)) id = opts_.make_id();
  const uint64_t seed = request.seed ? *request.seed : opts_.make_seed();
  const std::string log_path =
      opts_.log_dir.empty()
          ? std::string()
          : (std::filesystem::path(opts_.log_dir) / (id + ".jsonl")).string();
  auto session = std::make_shared<Session>(id, request, seed, std::move(policy),
                                           opts_.clock, log_path, opts_.templates);
  Session::Frames frames = session->Start();
  sessions_[id] = session;
  return {session, std::move(frames)};
}

std::shared_ptr<Session> SessionManager::Find(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionManager::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sessions_.size();
}

ReplayResult ReplaySessionLog(const std::vector<std::string>& lines,
                              PolicyCatalog& catalog, const TemplateSet* templates) {
  if (lines.empty()) throw std::invalid_argument("empty session log");
  std::vector<nlohmann::json> parsed;
  parsed.reserve(lines.size());
  for (const auto& l : lines) parsed.push_back(nlohmann::json::parse(l));

  const nlohmann::json& head = parsed.front();
  if (head.value("dir", "") != "out" ||
      head.at("frame").value("type", "") != "session_created") {
    throw std::invalid_argument("session log must start with session_created");
  }
  const nlohmann::json& created = head["frame"];
  SessionRequest request;
  request.condition = ModeFromString(created.at("condition").get<std::string>());
  request.policy = created.at("policy").get<std::string>();
  const uint64_t seed = created.at("seed").get<uint64_t>();
  auto policy = catalog.Load(request.policy);
  if (!policy) throw std::invalid_argument("unknown policy " + request.policy);

  ManualClock clock(head.at("ts_ms").get<int64_t>());
  Session session(created.at("session_id").get<std::string>(), request, seed,
                  policy, &clock, "", templates);
  session.Start();
  for (const auto& line : parsed) {
    const std::string dir = line.at("dir").get<std::string>();
    if (dir == "out") continue;
    clock.Set(line.at("ts_ms").get<int64_t>());
    if (dir == "in") {
      session.Handle(line.at("frame"));
    } else if (dir == "event") {
      session.Attach();
    } else {
      throw std::invalid_argument("unknown log direction " + dir);
    }
  }

  ReplayResult r;
  r.log = session.LogLines();
  r.summary = session.Summary();
  for (const auto& line : parsed) r.frames += line["dir"] == "out" ? 1 : 0;
  r.identical = r.log == lines;
  if (!r.identical) {
    const std::size_t n = std::min(r.log.size(), lines.size());
    std::size_t i = 0;
    while (i < n && r.log[i] == lines[i]) ++i;
    r.first_difference = "line " + std::to_string(i + 1) + ": logged " +
                         (i < lines.size() ? lines[i] : "<end>") + " replayed " +
                         (i < r.log.size() ? r.log[i] : "<end>");
  }
  return r;
}

std::vector<std::string> ReadLogLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace memassist
