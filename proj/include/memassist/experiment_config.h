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

// The full description of an experiment run. Every artifact written by the
// command-line tools embeds one of these so the run can be repeated.

#ifndef MEMASSIST_EXPERIMENT_CONFIG_H_
#define MEMASSIST_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "memassist/assist_mdp.h"
#include "memassist/mentalising.h"
#include "memassist/player.h"
#include "memassist/qlearn.h"
#include "memassist/simulation.h"

namespace memassist {

// Thrown for malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr char kPolicyNone[] = "none";
inline constexpr char kPolicyPerfect[] = "perfect";

struct ExperimentConfig {
  uint64_t seed = 0;

  // Training.
  int episodes = 20000;
  double gamma = 0.8;
  std::optional<Schedule> schedule;  // unset: derived from `episodes`

  // Environment.
  PlayerSpec player;
  RewardParams rewards;
  AssistMode mode = AssistMode::kToM;
  int window = 0;
  int max_moves = 500;
  MdpState initial_state = kInitialState;
  std::string templates;  // explanation template file; empty: built-in

  // Simulation. `policy` is "none", "perfect" or a Q-table path.
  std::string policy = kPolicyNone;
  int n_games = 2000;

  std::string out = ".";

  Schedule EffectiveSchedule() const;
  // Throws ConfigError.
  void Validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

nlohmann::json ExperimentConfigToJson(const ExperimentConfig& c);
// Missing keys keep their defaults; unknown keys are rejected. Throws
// ConfigError.
ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j);
ExperimentConfig LoadExperimentConfig(const std::string& path);

TrainOptions ToTrainOptions(const ExperimentConfig& c);
// `policy` and `templates` are borrowed and must outlive the options.
SimulationOptions ToSimulationOptions(const ExperimentConfig& c,
                                      const QTable* policy,
                                      const TemplateSet* templates);

}  // namespace memassist

#endif  // MEMASSIST_EXPERIMENT_CONFIG_H_
