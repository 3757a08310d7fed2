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

#include <deque>
#include <limits>
#include <stdexcept>

#include "memassist/qlearn.h"
#include "memassist/simulation.h"

namespace memassist {

TrainResult Train(const TrainOptions& opts) {
  if (opts.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (!(opts.gamma >= 0.0 && opts.gamma < 1.0)) {
    throw std::invalid_argument("gamma must be in [0,1)");
  }
  opts.rewards.Validate();
  opts.player.Validate();

  TrainResult result;
  QTable& table = result.table;
  table.meta.gamma = opts.gamma;
  table.meta.schedule = opts.schedule;
  table.meta.seed = opts.seed;
  table.meta.rewards = opts.rewards;
  table.meta.player = opts.player;
  table.meta.mode = opts.mode;
  table.meta.max_moves = opts.max_moves;
  table.meta.initial_state = opts.initial_state;

  // Exploration draws get their own stream, separate from every game.
  Rng explore(DeriveSeed(opts.seed, std::numeric_limits<uint64_t>::max()));
  const AssistedGameOptions gopts{opts.mode, opts.window, nullptr, opts.rewards,
                                  opts.initial_state};
  std::deque<int> trailing;
  long trailing_sum = 0;
  result.curve.reserve(static_cast<std::size_t>(opts.episodes));

  for (int ep = 0; ep < opts.episodes; ++ep) {
    const ScheduleValues sv = ScheduleAt(opts.schedule, ep);
    const GameSeeds seeds = SeedsFor(opts.seed, ep);
    AssistedGame game(GameState::New(seeds.board), seeds.assistant, gopts);
    auto player = MakePlayer(opts.player, seeds.player);

    auto choose = [&](const MdpState& s) {
      return SelectAction(table.row(s), sv.epsilon, explore);
    };
    auto learn = [&](const Transition& t) {
      ++table.visits[t.state];
      Update(table.values, t, sv.alpha, opts.gamma);
    };
    const GameRecord rec = RunEpisode(game, *player, choose, learn, opts.max_moves);

    trailing.push_back(rec.moves);
    trailing_sum += rec.moves;
    if (trailing.size() > 100) {
      trailing_sum -= trailing.front();
      trailing.pop_front();
    }
    result.curve.push_back(CurvePoint{
        ep, rec.moves, static_cast<double>(trailing_sum) / trailing.size(),
        sv.epsilon, sv.alpha});
  }
  table.meta.episodes_trained = opts.episodes;
  return result;
}

}  // namespace memassist
