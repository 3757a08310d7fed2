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

// Live play sessions, independent of any transport.
//
// A session owns one assisted game and speaks JSON frames. Every frame in
// or out is appended to a JSONL log together with the server time, which
// is enough to replay the session exactly.

#ifndef MEMASSIST_SESSION_H_
#define MEMASSIST_SESSION_H_

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "memassist/assisted_game.h"
#include "memassist/policy_catalog.h"
#include "memassist/simulation.h"

namespace memassist {

inline constexpr int kWireSchemaVersion = 1;

// Monotonic milliseconds.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual int64_t NowMs() = 0;
};

class SteadyClock : public Clock {
 public:
  int64_t NowMs() override;
};

class ManualClock : public Clock {
 public:
  explicit ManualClock(int64_t start = 0) : now_(start) {}
  int64_t NowMs() override { return now_; }
  void Set(int64_t ms) { now_ = ms; }
  void Advance(int64_t ms) { now_ += ms; }

 private:
  int64_t now_;
};

// Thrown by SessionManager::Create for unusable requests.
class SessionError : public std::runtime_error {
 public:
  enum class Code { kBadRequest, kUnknownPolicy };
  SessionError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct SessionRequest {
  AssistMode condition = AssistMode::kToM;
  std::string policy;
  std::optional<uint64_t> seed;
};

// Parses {condition, policy, seed?}. Throws SessionError(kBadRequest).
SessionRequest SessionRequestFromJson(const nlohmann::json& j);

struct SessionSummary {
  GameRecord record;
  int64_t completion_time_ms = 0;
};
nlohmann::json SessionSummaryToJson(const SessionSummary& s);

class Session {
 public:
  using Frames = std::vector<nlohmann::json>;

  // `log_path` may be empty for an in-memory log only.
  Session(std::string id, const SessionRequest& request, uint64_t seed,
          std::shared_ptr<const QTable> policy, Clock* clock,
          const std::string& log_path, const TemplateSet* templates = nullptr);

  const std::string& id() const { return id_; }
  AssistMode condition() const { return condition_; }
  uint64_t seed() const { return seed_; }

  // session_created, state_sync and the first hint_offer.
  Frames Start();
  // A client (re)connected: state_sync plus the pending hint_offer.
  Frames Attach();
  // Handles one client frame. flip_request yields flip_result followed by
  // either hint_offer or game_end; anything illegal yields one error frame
  // and leaves the session unchanged.
  Frames Handle(const nlohmann::json& frame);

  bool finished() const;
  SessionSummary Summary() const;
  std::vector<std::string> LogLines() const;
  // Copy of the game for inspection in tests.
  AssistedGame Game() const;

 private:
  nlohmann::json Frame(std::string_view type) const;
  nlohmann::json StateSync() const;
  nlohmann::json OfferNextHint();
  nlohmann::json ErrorFrame(std::string_view code, const std::string& message) const;
  Frames HandleFlip(const nlohmann::json& frame, int64_t now);
  void Log(int64_t now, std::string_view dir, const nlohmann::json& frame);
  SessionSummary SummaryLocked() const;

  mutable std::mutex mu_;
  const std::string id_;
  const AssistMode condition_;
  const std::string policy_name_;
  const uint64_t seed_;
  std::shared_ptr<const QTable> policy_;
  Clock* clock_;
  AssistedGame game_;
  std::optional<nlohmann::json> pending_hint_;
  int64_t created_ms_ = 0;
  std::optional<int64_t> finished_ms_;
  std::vector<std::string> log_;
  std::ofstream log_file_;
};

struct SessionManagerOptions {
  std::string log_dir;  // empty: logs kept in memory only
  Clock* clock = nullptr;  // null: a SteadyClock owned by the manager
  std::function<std::string()> make_id;  // null: random 128-bit hex
  std::function<uint64_t()> make_seed;   // null: std::random_device
  const TemplateSet* templates = nullptr;
};

class SessionManager {
 public:
  SessionManager(PolicyCatalog* catalog, SessionManagerOptions opts = {});

  // Returns the new session and its opening frames. Throws SessionError.
  std::pair<std::shared_ptr<Session>, Session::Frames> Create(
      const SessionRequest& request);
  std::shared_ptr<Session> Find(const std::string& id) const;
  std::size_t size() const;

 private:
  PolicyCatalog* catalog_;
  SessionManagerOptions opts_;
  std::unique_ptr<Clock> owned_clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

struct ReplayResult {
  bool identical = false;    // every regenerated frame equals the logged one
  std::size_t frames = 0;    // outgoing frames compared
  std::string first_difference;
  std::optional<SessionSummary> summary;
  std::vector<std::string> log;  // regenerated log lines
};

// Re-runs a session log against the policy it names. Throws
// std::invalid_argument for malformed logs.
ReplayResult ReplaySessionLog(const std::vector<std::string>& lines,
                              PolicyCatalog& catalog,
                              const TemplateSet* templates = nullptr);
std::vector<std::string> ReadLogLines(const std::string& path);

}  // namespace memassist

#endif  // MEMASSIST_SESSION_H_
