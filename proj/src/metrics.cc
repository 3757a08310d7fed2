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

#include "memassist/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace memassist {
namespace {

constexpr std::string_view kConfigPrefix = "# config: ";
constexpr std::string_view kCsvHeader =
    "game_index,seed,moves,flips,matches,completed,duration_ms,decisions,"
    "assistance_sum,offered,followed,led_to_match,normalized_assistance,"
    "follow_rate,match_rate,assistance_sequence";
constexpr int kCsvColumns = 16;

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
T ParseNumber(std::string_view field, std::string_view column) {
  T v{};
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("bad value for " + std::string(column) + ": " +
                                std::string(field));
  }
  return v;
}

std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Keys a comparison is expected to vary.
bool IsVariedKey(const std::string& key) { return key == "mode" || key == "out"; }

}  // namespace

std::string_view ToString(Metric m) {
  switch (m) {
    case Metric::kMoves:
      return "moves";
    case Metric::kFlips:
      return "flips";
    case Metric::kCompletionTime:
      return "completion_time_ms";
    case Metric::kNormalizedAssistance:
      return "normalized_assistance";
    case Metric::kFollowRate:
      return "follow_rate";
    case Metric::kMatchRate:
      return "match_from_hint_rate";
  }
  return "?";
}

double MetricValue(const GameRecord& g, Metric m) {
  switch (m) {
    case Metric::kMoves:
      return g.moves;
    case Metric::kFlips:
      return g.flips;
    case Metric::kCompletionTime:
      return static_cast<double>(g.duration_ms);
    case Metric::kNormalizedAssistance:
      return g.normalized_assistance();
    case Metric::kFollowRate:
      return g.follow_rate();
    case Metric::kMatchRate:
      return g.match_rate();
  }
  return 0.0;
}

Aggregate Summarize(std::vector<double> values) {
  Aggregate a;
  a.count = static_cast<int>(values.size());
  if (values.empty()) return a;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / a.count;
  if (a.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.sd = std::sqrt(ss / (a.count - 1));
  }
  return a;
}

Aggregate RunStats::Of(Metric m) const {
  std::vector<double> v;
  v.reserve(games.size());
  for (const GameRecord& g : games) v.push_back(MetricValue(g, m));
  return Summarize(std::move(v));
}

int RunStats::completed() const {
  return static_cast<int>(
      std::count_if(games.begin(), games.end(), [](const GameRecord& g) { return g.completed; }));
}

SuggestionCounts RunStats::suggestions() const {
  SuggestionCounts total;
  for (const GameRecord& g : games) {
    total.offered += g.suggestions.offered;
    total.followed += g.suggestions.followed;
    total.led_to_match += g.suggestions.led_to_match;
  }
  return total;
}

nlohmann::json GameRecordToJson(const GameRecord& g) {
  return {{"game_index", g.game_index},
          {"seed", g.seed},
          {"moves", g.moves},
          {"flips", g.flips},
          {"matches", g.matches},
          {"completed", g.completed},
          {"duration_ms", g.duration_ms},
          {"decisions", g.decisions},
          {"assistance_sum", g.assistance_sum},
          {"suggestions",
           {{"offered", g.suggestions.offered},
            {"followed", g.suggestions.followed},
            {"led_to_match", g.suggestions.led_to_match}}},
          {"normalized_assistance", g.normalized_assistance()},
          {"follow_rate", g.follow_rate()},
          {"match_rate", g.match_rate()},
          {"assistance_sequence", g.assistance_sequence}};
}

GameRecord GameRecordFromJson(const nlohmann::json& j) {
  GameRecord g;
  g.game_index = j.at("game_index").get<int>();
  g.seed = j.at("seed").get<uint64_t>();
  g.moves = j.at("moves").get<int>();
  g.flips = j.at("flips").get<int>();
  g.matches = j.at("matches").get<int>();
  g.completed = j.at("completed").get<bool>();
  g.duration_ms = j.at("duration_ms").get<int64_t>();
  g.decisions = j.at("decisions").get<int>();
  g.assistance_sum = j.at("assistance_sum").get<double>();
  const auto& s = j.at("suggestions");
  g.suggestions = {s.at("offered").get<int>(), s.at("followed").get<int>(),
                   s.at("led_to_match").get<int>()};
  g.assistance_sequence = j.at("assistance_sequence").get<std::string>();
  return g;
}

nlohmann::json RunStatsToJson(const RunStats& s) {
  nlohmann::json summary = nlohmann::json::object();
  for (Metric m : kAllMetrics) {
    const Aggregate a = s.Of(m);
    summary[std::string(ToString(m))] = {{"count", a.count}, {"mean", a.mean}, {"sd", a.sd}};
  }
  nlohmann::json games = nlohmann::json::array();
  for (const GameRecord& g : s.games) games.push_back(GameRecordToJson(g));
  return {{"schema_version", kRunStatsSchemaVersion},
          {"config", ExperimentConfigToJson(s.config)},
          {"summary", std::move(summary)},
          {"games", std::move(games)}};
}

RunStats RunStatsFromJson(const nlohmann::json& j) {
  const int version = j.at("schema_version").get<int>();
  if (version != kRunStatsSchemaVersion) {
    throw std::invalid_argument("unsupported run-stats schema_version " +
                                std::to_string(version));
  }
  RunStats s;
  s.config = ExperimentConfigFromJson(j.at("config"));
  for (const auto& g : j.at("games")) s.games.push_back(GameRecordFromJson(g));
  return s;
}

std::string RunStatsToCsv(const RunStats& s) {
  std::string out;
  out += kConfigPrefix;
  out += ExperimentConfigToJson(s.config).dump();
  out += '\n';
  out += kCsvHeader;
  out += '\n';
  for (const GameRecord& g : s.games) {
    out += std::to_string(g.game_index) + ',' + std::to_string(g.seed) + ',' +
           std::to_string(g.moves) + ',' + std::to_string(g.flips) + ',' +
           std::to_string(g.matches) + ',' + (g.completed ? "1" : "0") + ',' +
           std::to_string(g.duration_ms) + ',' + std::to_string(g.decisions) + ',' +
           FormatDouble(g.assistance_sum) + ',' +
           std::to_string(g.suggestions.offered) + ',' +
           std::to_string(g.suggestions.followed) + ',' +
           std::to_string(g.suggestions.led_to_match) + ',' +
           FormatDouble(g.normalized_assistance()) + ',' +
           FormatDouble(g.follow_rate()) + ',' + FormatDouble(g.match_rate()) + ',' +
           g.assistance_sequence + '\n';
  }
  return out;
}

RunStats RunStatsFromCsv(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  if (lines.size() < 2 || !lines[0].starts_with(kConfigPrefix)) {
    throw std::invalid_argument("csv is missing the '# config:' header line");
  }
  if (lines[1] != kCsvHeader) throw std::invalid_argument("unexpected csv header");

  RunStats s;
  try {
    s.config = ExperimentConfigFromJson(
        nlohmann::json::parse(lines[0].substr(kConfigPrefix.size())));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad config line: ") + e.what());
  }
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = SplitCsv(lines[i]);
    if (static_cast<int>(f.size()) != kCsvColumns) {
      throw std::invalid_argument("csv row " + std::to_string(i + 1) +
                                  " has the wrong column count");
    }
    GameRecord g;
    g.game_index = ParseNumber<int>(f[0], "game_index");
    g.seed = ParseNumber<uint64_t>(f[1], "seed");
    g.moves = ParseNumber<int>(f[2], "moves");
    g.flips = ParseNumber<int>(f[3], "flips");
    g.matches = ParseNumber<int>(f[4], "matches");
    g.completed = ParseNumber<int>(f[5], "completed") != 0;
    g.duration_ms = ParseNumber<int64_t>(f[6], "duration_ms");
    g.decisions = ParseNumber<int>(f[7], "decisions");
    g.assistance_sum = ParseNumber<double>(f[8], "assistance_sum");
    g.suggestions.offered = ParseNumber<int>(f[9], "offered");
    g.suggestions.followed = ParseNumber<int>(f[10], "followed");
    g.suggestions.led_to_match = ParseNumber<int>(f[11], "led_to_match");
    g.assistance_sequence = std::string(f[15]);
    s.games.push_back(std::move(g));
  }
  return s;
}

std::string TrainingCurveToCsv(const ExperimentConfig& config,
                               const std::vector<CurvePoint>& curve) {
  std::string out;
  out += kConfigPrefix;
  out += ExperimentConfigToJson(config).dump();
  out += "\nepisode,moves,trailing_mean_moves,epsilon,alpha\n";
  for (const CurvePoint& p : curve) {
    out += std::to_string(p.episode) + ',' + std::to_string(p.moves) + ',' +
           FormatDouble(p.trailing_mean) + ',' + FormatDouble(p.epsilon) + ',' +
           FormatDouble(p.alpha) + '\n';
  }
  return out;
}

ExportFormat FormatFromString(std::string_view s) {
  if (s == "csv") return ExportFormat::kCsv;
  if (s == "json") return ExportFormat::kJson;
  throw std::invalid_argument("unknown export format: " + std::string(s));
}

void WriteRunStats(const RunStats& s, const std::string& path, ExportFormat f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (f == ExportFormat::kCsv) {
    out << RunStatsToCsv(s);
  } else {
    out << RunStatsToJson(s).dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

RunStats ReadRunStats(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (std::string_view(text).starts_with(kConfigPrefix)) return RunStatsFromCsv(text);
  try {
    return RunStatsFromJson(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

CompareReport Compare(const RunStats& a, const RunStats& b) {
  CompareReport r;
  for (Metric m : kAllMetrics) {
    MetricComparison c{m, a.Of(m), b.Of(m)};
    c.delta = c.b.mean - c.a.mean;
    r.metrics.push_back(c);
  }
  const nlohmann::json ja = ExperimentConfigToJson(a.config);
  const nlohmann::json jb = ExperimentConfigToJson(b.config);
  for (const auto& [key, value] : ja.items()) {
    if (jb.at(key) == value) continue;
    (IsVariedKey(key) ? r.varied : r.mismatched).push_back(key);
  }
  return r;
}

std::string FormatCompareReport(const CompareReport& r, std::string_view label_a,
                                std::string_view label_b) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s %22.*s %22.*s %10s\n", "metric",
                static_cast<int>(label_a.size()), label_a.data(),
                static_cast<int>(label_b.size()), label_b.data(), "delta");
  out += line;
  for (const MetricComparison& c : r.metrics) {
    const std::string name(ToString(c.metric));
    std::snprintf(line, sizeof(line), "%-24s %12.4f (%7.4f) %12.4f (%7.4f) %+10.4f\n",
                  name.c_str(), c.a.mean, c.a.sd, c.b.mean, c.b.sd, c.delta);
    out += line;
  }
  auto join = [](const std::vector<std::string>& keys) {
    std::string s;
    for (const auto& k : keys) s += (s.empty() ? "" : ", ") + k;
    return s.empty() ? std::string("none") : s;
  };
  out += "varied: " + join(r.varied) + '\n';
  out += "mismatched config: " + join(r.mismatched) + '\n';
  return out;
}

nlohmann::json CompareReportToJson(const CompareReport& r) {
  nlohmann::json metrics = nlohmann::json::array();
  for (const MetricComparison& c : r.metrics) {
    metrics.push_back({{"metric", ToString(c.metric)},
                       {"a", {{"count", c.a.count}, {"mean", c.a.mean}, {"sd", c.a.sd}}},
                       {"b", {{"count", c.b.count}, {"mean", c.b.mean}, {"sd", c.b.sd}}},
                       {"delta", c.delta}});
  }
  return {{"metrics", std::move(metrics)},
          {"varied", r.varied},
          {"mismatched", r.mismatched}};
}

}  // namespace memassist
