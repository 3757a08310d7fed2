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


// Acceptance run. Prints one PASS/FAIL line per criterion, with indented
// detail lines, and exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "memassist/assist_mdp.h"
#include "memassist/experiment_config.h"
#include "memassist/metrics.h"
#include "memassist/player.h"
#include "memassist/policy_catalog.h"
#include "memassist/qlearn.h"
#include "memassist/session.h"
#include "memassist/simulation.h"
#include "mentalising_properties.h"
#include "test_util.h"

namespace memassist {
namespace {

constexpr double kExact = 1e-12;

class Criterion {
 public:
  explicit Criterion(std::string name)
      : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

  void Check(bool ok, const std::string& detail) {
    pass_ = pass_ && ok;
    details_.push_back(std::string(ok ? "ok    " : "FAIL  ") + detail);
  }

  void Note(const std::string& detail) { details_.push_back("      " + detail); }

  double elapsed_s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  bool Report() const {
    std::printf("%s  %s  (%.1f s)\n", pass_ ? "PASS" : "FAIL", name_.c_str(), elapsed_s());
    for (const std::string& d : details_) std::printf("        %s\n", d.c_str());
    std::fflush(stdout);
    return pass_;
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point start_;
  bool pass_ = true;
  std::vector<std::string> details_;
};

std::string Fmt(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

int Threads() { return std::max(1u, std::thread::hardware_concurrency()); }

TrainOptions TrainingFor(uint64_t seed) {
  ExperimentConfig c;
  c.seed = seed;
  return ToTrainOptions(c);
}

RunStats Run(const ExperimentConfig& c, const QTable* policy, int threads = Threads()) {
  SimulationOptions opts = ToSimulationOptions(c, policy, nullptr);
  opts.threads = threads;
  return RunStats{c, Simulate(opts)};
}

ExperimentConfig SimConfig(const std::string& policy) {
  ExperimentConfig c;
  c.seed = 1;
  c.n_games = 2000;
  c.policy = policy;
  return c;
}

bool SimulationMeans() {
  Criterion c("simulated move counts: perfect, unassisted and assisted players");
  const QTable policy = Train(TrainingFor(1)).table;
  const Aggregate perfect = Run(SimConfig(kPolicyPerfect), nullptr).Of(Metric::kMoves);
  const Aggregate none = Run(SimConfig(kPolicyNone), nullptr).Of(Metric::kMoves);
  const Aggregate assisted = Run(SimConfig("trained"), &policy).Of(Metric::kMoves);

  c.Check(std::abs(perfect.mean - 25.1) <= 2.0,
          Fmt("perfect mean %.3f (sd %.3f, n %d) within 25.1 +/- 2.0", perfect.mean,
              perfect.sd, perfect.count));
  c.Check(perfect.mean > 19.3, Fmt("perfect mean %.3f > 19.3", perfect.mean));
  c.Check(std::abs(none.mean - 48.15) <= 5.0,
          Fmt("unassisted imperfect mean %.3f (sd %.3f, n %d) within 48.15 +/- 5.0",
              none.mean, none.sd, none.count));
  c.Check(assisted.mean < none.mean - 3.0,
          Fmt("assisted mean %.3f (sd %.3f) < unassisted mean - 3.0 = %.3f", assisted.mean,
              assisted.sd, none.mean - 3.0));
  c.Check(perfect.mean < assisted.mean && assisted.mean < none.mean,
          Fmt("ordering perfect %.3f < assisted %.3f < unassisted %.3f", perfect.mean,
              assisted.mean, none.mean));
  c.Check(c.elapsed_s() < 120.0, Fmt("runtime %.1f s < 120 s", c.elapsed_s()));
  return c.Report();
}

double MeanWeight(const QTable& q, bool second_flip) {
  double sum = 0.0;
  int n = 0;
  for (int s = 0; s < kNumStates; ++s) {
    if (IsSecondFlipContext(Decode(s)) != second_flip) continue;
    sum += AssistanceWeight(q.Greedy(Decode(s)));
    ++n;
  }
  return sum / n;
}

bool PolicyStructure() {
  Criterion c("policy structure over training seeds 1-5");
  int end_ok = 0;
  int mass_ok = 0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const QTable q = Train(TrainingFor(seed)).table;
    std::string end_actions;
    bool end_no_help = true;
    for (AssistAction prev : kAllActions) {
      const AssistAction a = q.Greedy({GamePhase::kEnd, prev, PrevOutcome::kSCorrect});
      end_no_help = end_no_help && a == AssistAction::kNoHelp;
      end_actions += std::string(end_actions.empty() ? "" : ",") + std::string(ToString(a));
    }
    const double first = MeanWeight(q, false);
    const double second = MeanWeight(q, true);
    end_ok += end_no_help;
    mass_ok += second > first;
    c.Note(Fmt("seed %llu: end/*/s_correct -> %s; weight second %.3f vs first %.3f",
               static_cast<unsigned long long>(seed), end_actions.c_str(), second, first));
  }
  c.Check(end_ok >= 4, Fmt("(end, *, s_correct) greedy no_help in %d/5 seeds (need 4)", end_ok));
  c.Check(mass_ok >= 4,
          Fmt("second-flip assistance weight > first-flip in %d/5 seeds (need 4)", mass_ok));
  c.Check(c.elapsed_s() < 300.0, Fmt("runtime %.1f s < 300 s", c.elapsed_s()));
  return c.Report();
}

bool OracleEquivalence() {
  Criterion c("q-learning matches value iteration on the two-pair environment");
  const FiniteMdp mdp = BuildTwoPairEnv();
  const ValueIterationResult vi = ValueIterate(mdp, 0.8);
  std::vector<int64_t> visits;
  const ActionValues q =
      QLearnFinite(mdp, 100000, Schedule::ForEpisodes(100000), 0.8, 1, &visits);
  int policy_diff = 0;
  int unvisited = 0;
  double max_err = 0.0;
  for (int s = 0; s < mdp.num_states(); ++s) {
    unvisited += visits[s] == 0;
    policy_diff += GreedyAction(q.row(s)) != vi.policy[s];
    for (int a = 0; a < kNumActions; ++a) {
      max_err = std::max(max_err, std::abs(q.row(s)[a] - vi.q.row(s)[a]));
    }
  }
  c.Check(unvisited == 0, Fmt("%d states, %d unvisited", mdp.num_states(), unvisited));
  c.Check(policy_diff == 0, Fmt("greedy policy differs in %d states", policy_diff));
  c.Check(max_err <= 1e-6, Fmt("max |Q - Q*| = %.3g <= 1e-6", max_err));
  return c.Report();
}

GameState PairedBoard() {
  std::array<int, kCells> layout{};
  for (int i = 0; i < kCells; ++i) layout[i] = i / 2;
  return GameState::FromLayout(layout);
}

bool UnitFormulas() {
  Criterion c("reward and match-probability formulas");
  const RewardParams r;
  auto exact = [&](double got, double want, const std::string& what) {
    c.Check(std::abs(got - want) <= kExact, Fmt("%s = %.15g (want %.15g)", what.c_str(), got, want));
  };
  exact(RewardFirst(AssistAction::kNoHelp, 1, r), 10.0, "reward_first(no_help, 1)");
  exact(RewardSecond(AssistAction::kNoHelp, 4, GamePhase::kBegin, r), 10.0 / 12.0,
        "reward_second(no_help, 4, begin)");
  exact(RewardSecond(AssistAction::kSugRow, 2, GamePhase::kBegin, r), 0.6,
        "reward_second(sug_row, 2, begin)");

  // Four pairs removed, one card face up, partner never seen.
  GameState g = PairedBoard();
  MemoryModel m(0.1);
  for (int cell : {0, 1, 2, 3, 4, 5, 6, 7, 8}) m.Observe(g.Flip(Location::FromIndex(cell)).record);
  const Location partner = Location::FromIndex(9);
  exact(ComputeMatchProbability(m, g).p, 0.125, "unseen branch at NP=12, NM=4");
  exact(ComputeMatchProbability(m, g, HintTarget::Row(partner.row)).p - 0.125, 1.0 / 6.0,
        "row hint modifier");
  exact(ComputeMatchProbability(m, g, HintTarget::Col(partner.col)).p - 0.125, 0.25,
        "column hint modifier");
  exact(ComputeMatchProbability(m, g, HintTarget::Cell(partner)).p, 1.0, "card hint");

  GameState h = PairedBoard();
  MemoryModel recall(0.1);
  for (int cell : {0, 2, 4, 6, 8, 10}) recall.Observe(h.Flip(Location::FromIndex(cell)).record);
  exact(recall.PSeen(Location::FromIndex(0), h.flips()), std::pow(0.9, 5),
        "p_seen(d=0.1, 5 flips later)");
  return c.Report();
}

bool MentalisingProperties() {
  Criterion c("hint grounding and explanation properties");
  const testing::PropertyCounts tom =
      testing::CheckMentalisingProperties(10000, AssistMode::kToM, 1);
  const testing::PropertyCounts notom =
      testing::CheckMentalisingProperties(10000, AssistMode::kNoToM, 2);
  c.Check(tom.games + notom.games >= 10000, Fmt("%d random games", tom.games + notom.games));
  c.Check(tom.second_violations + notom.second_violations == 0,
          Fmt("second-card hints containing the partner: %lld/%lld",
              static_cast<long long>(tom.second_hints + notom.second_hints -
                                     tom.second_violations - notom.second_violations),
              static_cast<long long>(tom.second_hints + notom.second_hints)));
  c.Check(tom.tom_first_violations == 0,
          Fmt("tom first-card hints at a seen face's partner: %lld/%lld",
              static_cast<long long>(tom.tom_first_card - tom.tom_first_violations),
              static_cast<long long>(tom.tom_first_card)));
  c.Check(notom.notom_explained == 0,
          Fmt("notom hints with an explanation: %lld of %lld",
              static_cast<long long>(notom.notom_explained),
              static_cast<long long>(notom.notom_hints)));
  c.Check(tom.history_mismatches + notom.history_mismatches == 0,
          Fmt("history differs from a fold of the ledger at %lld of %lld steps",
              static_cast<long long>(tom.history_mismatches + notom.history_mismatches),
              static_cast<long long>(tom.history_checks + notom.history_checks)));
  for (const auto* counts : {&tom, &notom}) {
    if (!counts->examples.empty()) c.Check(false, counts->examples.front());
  }
  return c.Report();
}

GameRecord Script(std::initializer_list<std::pair<std::optional<AssistAction>, int>> steps) {
  AssistedGame game(PairedBoard(), 1);
  for (const auto& [action, cell] : steps) {
    if (action) game.Offer(*action);
    game.Flip(Location::FromIndex(cell));
  }
  return RecordOf(game);
}

bool MetricsPipeline() {
  Criterion c("assistance and follow-rate metrics");
  using A = AssistAction;
  const double mixed =
      Script({{A::kNoHelp, 0}, {A::kSugCard, 1}, {A::kSugCol, 2}, {A::kSugRow, 4}})
          .normalized_assistance();
  c.Check(std::abs(mixed - 3.5 / 4.0) <= kExact, Fmt("N,K,C,R over 4 flips = %.6f (want 0.875)", mixed));
  const double sparse =
      Script({{std::nullopt, 0}, {A::kSugCard, 2}, {std::nullopt, 4}, {std::nullopt, 6}})
          .normalized_assistance();
  c.Check(std::abs(sparse - 0.5) <= kExact, Fmt("one K over 4 flips = %.6f (want 0.5)", sparse));

  QTable no_help;
  for (int s = 0; s < kNumStates; ++s) no_help.values.at(s, A::kNoHelp) = 1.0;
  ExperimentConfig cfg = SimConfig("no_help");
  cfg.n_games = 200;
  const Aggregate none = Run(cfg, &no_help).Of(Metric::kNormalizedAssistance);
  c.Check(none.mean == 0.0 && none.sd == 0.0,
          Fmt("all-no_help run: normalized assistance mean %.3f", none.mean));

  QTable card;
  for (int s = 0; s < kNumStates; ++s) card.values.at(s, A::kSugCard) = 1.0;
  cfg.player.compliance = 1.0;
  const RunStats compliant = Run(cfg, &card);
  const SuggestionCounts sc = compliant.suggestions();
  c.Check(sc.offered > 0 && sc.followed == sc.offered,
          Fmt("compliance=1 run: followed %lld of %lld hints",
              static_cast<long long>(sc.followed), static_cast<long long>(sc.offered)));
  c.Check(compliant.Of(Metric::kFollowRate).mean == 1.0,
          Fmt("compliance=1 run: mean follow rate %.3f", compliant.Of(Metric::kFollowRate).mean));
  return c.Report();
}

std::vector<std::string> PlaySession(PolicyCatalog& catalog, uint64_t seed) {
  ManualClock clock(5000);
  SessionManagerOptions opts;
  opts.clock = &clock;
  opts.make_id = [] { return std::string("acceptance"); };
  SessionManager manager(&catalog, opts);
  auto [session, frames] = manager.Create({AssistMode::kToM, "policy", seed});
  auto player = MakePlayer(PlayerSpec{}, seed);
  HintTarget hint = HintTarget::None();
  while (!session->finished()) {
    const AssistedGame game = session->Game();
    if (game.current_hint()) hint = game.current_hint()->target;
    const Location loc = game.game().awaiting_second_flip()
                             ? player->ChooseSecond(game.game(), hint)
                             : player->ChooseFirst(game.game(), hint);
    clock.Advance(900);
    session->Handle({{"type", "flip_request"}, {"location", LocationToJson(loc)}});
    player->Observe(session->Game().game().ledger().back());
  }
  return session->LogLines();
}

bool Determinism() {
  Criterion c("determinism of tables, simulations and session replays");
  testing::TempDir dir;
  TrainOptions t = TrainingFor(7);
  t.episodes = 2000;
  t.schedule = Schedule::ForEpisodes(2000);
  const QTable q = Train(t).table;
  SaveQTable(q, dir.file("a.json"));
  SaveQTable(Train(t).table, dir.file("b.json"));
  c.Check(testing::ReadFile(dir.file("a.json")) == testing::ReadFile(dir.file("b.json")),
          "q-table files for the same (seed, config) are byte-identical");

  ExperimentConfig cfg = SimConfig("policy");
  cfg.n_games = 300;
  WriteRunStats(Run(cfg, &q, 4), dir.file("a.csv"), ExportFormat::kCsv);
  WriteRunStats(Run(cfg, &q, 1), dir.file("b.csv"), ExportFormat::kCsv);
  c.Check(testing::ReadFile(dir.file("a.csv")) == testing::ReadFile(dir.file("b.csv")),
          "simulation csv byte-identical (4 threads vs 1)");

  PolicyCatalog catalog(dir.path());
  catalog.Add("policy", q);
  const std::vector<std::string> log = PlaySession(catalog, 99);
  const ReplayResult replay = ReplaySessionLog(log, catalog);
  c.Check(replay.identical, Fmt("session log replays identically (%zu lines)", log.size()) +
                                (replay.identical ? "" : ": " + replay.first_difference));
  c.Check(PlaySession(catalog, 99) == log, "same seed and inputs give the same session log");
  return c.Report();
}

}  // namespace
}  // namespace memassist

int main() {
  using namespace memassist;
  int failed = 0;
  for (auto* criterion : {SimulationMeans, PolicyStructure, OracleEquivalence, UnitFormulas,
                          MentalisingProperties, MetricsPipeline, Determinism}) {
    failed += !criterion();
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
