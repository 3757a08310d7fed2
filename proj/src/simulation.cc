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

#include "memassist/simulation.h"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace memassist {

char ActionCode(AssistAction a) {
  switch (a) {
    case AssistAction::kNoHelp:
      return 'N';
    case AssistAction::kSugCol:
      return 'C';
    case AssistAction::kSugRow:
      return 'R';
    case AssistAction::kSugCard:
      return 'K';
  }
  return '?';
}

AssistAction ActionFromCode(char c) {
  switch (c) {
    case 'N':
      return AssistAction::kNoHelp;
    case 'C':
      return AssistAction::kSugCol;
    case 'R':
      return AssistAction::kSugRow;
    case 'K':
      return AssistAction::kSugCard;
    default:
      throw std::invalid_argument(std::string("unknown action code ") + c);
  }
}

GameSeeds SeedsFor(uint64_t seed, int game_index) {
  const uint64_t base = 3 * static_cast<uint64_t>(game_index);
  return {DeriveSeed(seed, base), DeriveSeed(seed, base + 1),
          DeriveSeed(seed, base + 2)};
}

GameRecord RecordOf(const AssistedGame& game) {
  GameRecord rec;
  rec.seed = game.game().seed();
  rec.moves = game.game().completed_moves();
  rec.flips = game.game().flips();
  rec.matches = game.game().matches();
  rec.completed = game.game().complete();
  rec.decisions = game.decisions();
  rec.assistance_sum = game.assistance_sum();
  rec.suggestions = game.suggestions();
  rec.assistance_sequence.reserve(game.actions().size());
  for (AssistAction a : game.actions()) rec.assistance_sequence.push_back(ActionCode(a));
  return rec;
}

GameRecord RunEpisode(AssistedGame& game, Player& player,
                      const ActionChooser& choose, const TransitionSink& sink,
                      int max_moves) {
  while (!game.game().complete() && game.game().completed_moves() < max_moves) {
    HintTarget target;
    if (choose) target = game.Offer(choose(game.mdp_state())).target;
    const Location loc = game.decision_point() == DecisionPoint::kFirstFlip
                             ? player.ChooseFirst(game.game(), target)
                             : player.ChooseSecond(game.game(), target);
    const StepResult step = game.Flip(loc);
    player.Observe(step.flip.record);
    if (sink && step.transition) sink(*step.transition);
  }
  return RecordOf(game);
}

GameRecord PlayGame(const SimulationOptions& opts, int game_index) {
  const GameSeeds seeds = SeedsFor(opts.seed, game_index);
  AssistedGameOptions gopts{opts.mode, opts.window, opts.templates, opts.rewards,
                            opts.initial_state};
  AssistedGame game(GameState::New(seeds.board), seeds.assistant, gopts);
  auto player = MakePlayer(opts.player, seeds.player);

  ActionChooser choose;
  if (opts.policy) {
    const QTable* q = opts.policy;
    choose = [q](const MdpState& s) { return q->Greedy(s); };
  }
  GameRecord rec = RunEpisode(game, *player, choose, nullptr, opts.max_moves);
  rec.game_index = game_index;
  return rec;
}

std::vector<GameRecord> Simulate(const SimulationOptions& opts) {
  if (opts.n_games < 1) throw std::invalid_argument("n_games must be >= 1");
  std::vector<GameRecord> out(static_cast<std::size_t>(opts.n_games));
  const int threads = std::clamp(opts.threads, 1, opts.n_games);
  if (threads == 1) {
    for (int i = 0; i < opts.n_games; ++i) out[i] = PlayGame(opts, i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < opts.n_games; i = next++) out[i] = PlayGame(opts, i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace memassist
