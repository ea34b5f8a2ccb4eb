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

#include <functional>
#include <optional>

#include "ctf/agents.hpp"
#include "ctf/env.hpp"
#include "ctf/rng.hpp"
#include "ctf/topology.hpp"

namespace ctf {

// Everything that happened in one turn, as seen by the environment.
struct TurnRecord {
  int turn = 0;  // 0-based index of the turn just played
  Decision attacker;
  Decision defender;
  Experience attacker_experience;  // true (untampered) transitions
  Experience defender_experience;
  std::optional<double> attacker_loss;
  std::optional<double> defender_loss;
};

struct GameHooks {
  std::function<void(const TurnRecord&, const GameState& next)> on_turn;
};

struct GameResult {
  Winner winner = Winner::kNone;
  int win_turn = 0;  // number of turns played
  GameState final_state;
};

// Plays one game from reset(t, run_index) until check_winner fires. Each
// turn both players act on the current state, the environment steps, both
// observe their transition and then take one learning step.
GameResult play_game(const Topology& t, Player& attacker, Player& defender, const RewardConfig& reward,
                     int turn_limit, int run_index, Rng& rng, const GameHooks& hooks = {});

}  // namespace ctf
