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

#include "memassist/experiment_config.h"

#include <fstream>
#include <set>

namespace memassist {
namespace {

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "seed",      "episodes",      "gamma",     "schedule", "player",
      "rewards",   "mode",          "window",    "max_moves", "initial_state",
      "templates", "policy",        "n_games",   "out"};
  return keys;
}

}  // namespace

Schedule ExperimentConfig::EffectiveSchedule() const {
  return schedule ? *schedule : Schedule::ForEpisodes(episodes);
}

void ExperimentConfig::Validate() const {
  if (episodes < 1) throw ConfigError("episodes must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must be in [0,1)");
  if (window < 0) throw ConfigError("window must be >= 0");
  if (max_moves < 1) throw ConfigError("max_moves must be >= 1");
  if (n_games < 1) throw ConfigError("n_games must be >= 1");
  if (policy.empty()) throw ConfigError("policy must not be empty");
  try {
    player.Validate();
    rewards.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json ExperimentConfigToJson(const ExperimentConfig& c) {
  return {
      {"seed", c.seed},
      {"episodes", c.episodes},
      {"gamma", c.gamma},
      {"schedule", c.schedule ? ScheduleToJson(*c.schedule) : nlohmann::json()},
      {"player", PlayerSpecToJson(c.player)},
      {"rewards", RewardParamsToJson(c.rewards)},
      {"mode", ToString(c.mode)},
      {"window", c.window},
      {"max_moves", c.max_moves},
      {"initial_state", MdpStateToJson(c.initial_state)},
      {"templates", c.templates},
      {"policy", c.policy},
      {"n_games", c.n_games},
      {"out", c.out},
  };
}

ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!KnownKeys().contains(key)) throw ConfigError("unknown config key: " + key);
  }
  ExperimentConfig c;
  try {
    c.seed = j.value("seed", c.seed);
    c.episodes = j.value("episodes", c.episodes);
    c.gamma = j.value("gamma", c.gamma);
    if (j.contains("schedule") && !j["schedule"].is_null()) {
      c.schedule = ScheduleFromJson(j["schedule"]);
    }
    if (j.contains("player")) c.player = PlayerSpecFromJson(j["player"]);
    if (j.contains("rewards")) c.rewards = RewardParamsFromJson(j["rewards"]);
    if (j.contains("mode")) c.mode = ModeFromString(j["mode"].get<std::string>());
    c.window = j.value("window", c.window);
    c.max_moves = j.value("max_moves", c.max_moves);
    if (j.contains("initial_state")) {
      c.initial_state = MdpStateFromJson(j["initial_state"]);
    }
    c.templates = j.value("templates", c.templates);
    c.policy = j.value("policy", c.policy);
    c.n_games = j.value("n_games", c.n_games);
    c.out = j.value("out", c.out);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
  c.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return ExperimentConfigFromJson(j);
}

TrainOptions ToTrainOptions(const ExperimentConfig& c) {
  TrainOptions t;
  t.episodes = c.episodes;
  t.player = c.player;
  t.seed = c.seed;
  t.schedule = c.EffectiveSchedule();
  t.rewards = c.rewards;
  t.gamma = c.gamma;
  t.mode = c.mode;
  t.window = c.window;
  t.max_moves = c.max_moves;
  t.initial_state = c.initial_state;
  return t;
}

SimulationOptions ToSimulationOptions(const ExperimentConfig& c,
                                      const QTable* policy,
                                      const TemplateSet* templates) {
  SimulationOptions s;
  s.player = c.policy == kPolicyPerfect ? PlayerSpec::Perfect() : c.player;
  s.policy = policy;
  s.mode = c.mode;
  s.window = c.window;
  s.templates = templates;
  s.rewards = c.rewards;
  s.initial_state = c.initial_state;
  s.n_games = c.n_games;
  s.seed = c.seed;
  s.max_moves = c.max_moves;
  return s;
}

}  // namespace memassist
