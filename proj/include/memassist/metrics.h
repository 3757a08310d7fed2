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

// Per-game records, their aggregates, and the CSV/JSON files that carry
// them between tools.

#ifndef MEMASSIST_METRICS_H_
#define MEMASSIST_METRICS_H_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "memassist/experiment_config.h"
#include "memassist/simulation.h"

namespace memassist {

enum class Metric {
  kMoves,
  kFlips,
  kCompletionTime,
  kNormalizedAssistance,
  kFollowRate,
  kMatchRate,
};
inline constexpr std::array<Metric, 6> kAllMetrics = {
    Metric::kMoves,      Metric::kFlips,     Metric::kCompletionTime,
    Metric::kNormalizedAssistance, Metric::kFollowRate, Metric::kMatchRate};

std::string_view ToString(Metric m);
double MetricValue(const GameRecord& g, Metric m);

struct Aggregate {
  int count = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 below two values

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

// Sorts before summing, so the result does not depend on input order.
Aggregate Summarize(std::vector<double> values);

struct RunStats {
  ExperimentConfig config;
  std::vector<GameRecord> games;

  Aggregate Of(Metric m) const;
  int completed() const;
  SuggestionCounts suggestions() const;

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

inline constexpr int kRunStatsSchemaVersion = 1;

nlohmann::json GameRecordToJson(const GameRecord& g);
GameRecord GameRecordFromJson(const nlohmann::json& j);

nlohmann::json RunStatsToJson(const RunStats& s);
RunStats RunStatsFromJson(const nlohmann::json& j);

// First line is "# config: " followed by the compact config JSON, then a
// header row and one row per game.
std::string RunStatsToCsv(const RunStats& s);
RunStats RunStatsFromCsv(std::string_view text);

// "# config:" line, then episode,moves,trailing_mean_moves,epsilon,alpha.
std::string TrainingCurveToCsv(const ExperimentConfig& config,
                               const std::vector<CurvePoint>& curve);

enum class ExportFormat { kCsv, kJson };
ExportFormat FormatFromString(std::string_view s);

void WriteRunStats(const RunStats& s, const std::string& path, ExportFormat f);
// Format is detected from the content.
RunStats ReadRunStats(const std::string& path);

struct MetricComparison {
  Metric metric;
  Aggregate a;
  Aggregate b;
  double delta = 0.0;  // b.mean - a.mean
};

struct CompareReport {
  std::vector<MetricComparison> metrics;
  std::vector<std::string> varied;      // config keys expected to differ
  std::vector<std::string> mismatched;  // any other differing config key

  bool configs_match() const { return mismatched.empty(); }
};

CompareReport Compare(const RunStats& a, const RunStats& b);
std::string FormatCompareReport(const CompareReport& r, std::string_view label_a,
                                std::string_view label_b);
nlohmann::json CompareReportToJson(const CompareReport& r);

}  // namespace memassist

#endif  // MEMASSIST_METRICS_H_
