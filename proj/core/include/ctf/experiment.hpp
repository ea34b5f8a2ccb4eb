// Copyright 2026 The ctf-arena Authors
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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctf/agents.hpp"
#include "ctf/env.hpp"
#include "ctf/game.hpp"
#include "ctf/poison.hpp"

namespace ctf {

struct ExperimentConfig {
  int game = 1;  // 1: DDQN attacks, N2D defends. 2: roles reversed.
  bool attack_enabled = false;
  std::vector<int> turn_limits = {5000, 50000, 500000};
  int runs_per_set = 10;
  std::uint64_t base_seed = 0;
  PoisonConfig poison;  // enabled is forced to attack_enabled when a run is built
  RewardConfig reward;
  AgentConfig agent;
  bool carry_weights = false;  // keep both learners across the runs of a set
  int threads = 1;

  // Throws ConfigError.
  void validate() const;
  int turn_limit(int set) const;  // set is 1-based
  bool operator==(const ExperimentConfig&) const = default;
};

// Flat "key = value" text; '#' starts a comment. Keys: game, attack,
// turn_limits (comma list), runs_per_set, seed, carry_weights, threads,
// poison.{limit,q_threshold}, reward.{flag_capture,attacker_eliminated,
// step_cost,invalid_action,collateral}, agent.{hidden,gamma,learning_rate,
// epsilon_start,epsilon_end,epsilon_decay_fraction,replay_capacity,
// batch_size,target_sync_period,n_step,random_blend},
// dnd.{capacity,neighbors,smoothing,write_rate}. Values override `base`.
// Throws ConfigError naming the line for unknown keys or bad values.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

Algorithm algorithm_for(int game, Role role);

std::uint64_t run_seed(const ExperimentConfig& cfg, int set, int run);

struct RunRecord {
  int set = 0;  // 1-based
  int run = 0;  // 1-based
  std::optional<Algorithm> winner;  // empty when the run failed
  int win_turn = 0;
  std::uint64_t seed = 0;
  std::string error;

  bool operator==(const RunRecord&) const = default;
};

// Optional per-run observers. Streams are written as the game is played.
struct RunInstruments {
  std::ostream* action_log = nullptr;   // action-log CSV
  std::ostream* diagnostics = nullptr;  // turn,role,loss,epsilon,action-source
  std::ostream* audit = nullptr;        // poison audit CSV, attack runs only
  std::function<void(const TurnRecord&, const GameState& next)> on_turn;
  // Called after the game with both players and the tap (null without attack).
  std::function<void(const Player& attacker, const Player& defender, const WhiteboxTap* tap)> on_finish;
};

RunRecord run_game(const ExperimentConfig& cfg, int set, int run, const RunInstruments& instruments = {});

using InstrumentFactory = std::function<RunInstruments(int run)>;

// runs_per_set records ordered by run index. Runs execute on cfg.threads
// workers unless carry_weights is set, which forces sequential play.
std::vector<RunRecord> run_set(const ExperimentConfig& cfg, int set, const InstrumentFactory& instruments = {});

}  // namespace ctf
