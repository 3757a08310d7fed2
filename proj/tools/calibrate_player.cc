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

// Grid search over the imperfect player's decay rate and exploration
// probability. Prints mean/SD of unassisted moves for every grid point.
// Among points whose mean is within the tolerance of the target, the one
// with the SD closest to the target SD wins; otherwise the closest mean.

#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "CLI11.hpp"
#include "memassist/metrics.h"
#include "memassist/simulation.h"

int main(int argc, char** argv) {
  CLI::App app{"Calibrate the imperfect player against a target mean move count"};
  double target = 48.15;
  double target_sd = 7.55;
  double tolerance = 0.5;
  int games = 2000;
  uint64_t seed = 0;
  double d_min = 0.05, d_max = 0.40, d_step = 0.01;
  double e_min = 0.1, e_max = 0.9, e_step = 0.1;
  int threads = 1;
  app.add_option("--target", target, "Target mean moves");
  app.add_option("--target-sd", target_sd, "Target SD of moves");
  app.add_option("--tolerance", tolerance, "Accepted distance from the target mean");
  app.add_option("--games", games, "Games per grid point")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--d-min", d_min);
  app.add_option("--d-max", d_max);
  app.add_option("--d-step", d_step)->check(CLI::PositiveNumber);
  app.add_option("--explore-min", e_min);
  app.add_option("--explore-max", e_max);
  app.add_option("--explore-step", e_step)->check(CLI::PositiveNumber);
  app.add_option("--threads", threads)->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  // (outside tolerance, error) ordered lexicographically.
  std::pair<bool, double> best_key{true, std::numeric_limits<double>::infinity()};
  memassist::PlayerSpec best;
  memassist::Aggregate best_moves;

  std::printf("d,p_explore,mean_moves,sd_moves\n");
  const int nd = static_cast<int>(std::round((d_max - d_min) / d_step));
  const int ne = static_cast<int>(std::round((e_max - e_min) / e_step));
  for (int i = 0; i <= nd; ++i) {
    for (int k = 0; k <= ne; ++k) {
      memassist::SimulationOptions opts;
      opts.player.d = d_min + i * d_step;
      opts.player.p_explore = e_min + k * e_step;
      opts.n_games = games;
      opts.seed = seed;
      opts.threads = threads;
      memassist::RunStats stats;
      stats.games = memassist::Simulate(opts);
      const memassist::Aggregate moves = stats.Of(memassist::Metric::kMoves);
      std::printf("%.4f,%.4f,%.3f,%.3f\n", opts.player.d, opts.player.p_explore,
                  moves.mean, moves.sd);
      const double mean_err = std::abs(moves.mean - target);
      const bool outside = mean_err > tolerance;
      const std::pair<bool, double> key{
          outside, outside ? mean_err : std::abs(moves.sd - target_sd)};
      if (key < best_key) {
        best_key = key;
        best = opts.player;
        best_moves = moves;
      }
    }
  }
  std::printf("best: d=%.4f p_explore=%.4f mean=%.3f sd=%.3f\n", best.d,
              best.p_explore, best_moves.mean, best_moves.sd);
  return 0;
}
