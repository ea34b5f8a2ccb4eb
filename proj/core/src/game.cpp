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

#include "ctf/game.hpp"

#include "ctf/errors.hpp"

namespace ctf {

namespace {

Action checked_action(Role role, const Decision& d, int host_count, const ActionMask& mask) {
  if (d.action < 0 || static_cast<std::size_t>(d.action) >= mask.size())
    throw ContractViolation("play_game: player chose an action outside its action space");
  return action_from_index(role, d.action, host_count);
}

}  // namespace

GameResult play_game(const Topology& t, Player& attacker, Player& defender, const RewardConfig& reward,
                     int turn_limit, int run_index, Rng& rng, const GameHooks& hooks) {
  if (turn_limit <= 0) throw DomainError("play_game: turn limit must be positive");
  reward.validate();
  attacker.begin_game(turn_limit);
  defender.begin_game(turn_limit);

  GameState g = reset(t, run_index);
  const int n = t.host_count();
  while (!g.terminal()) {
    const StateVector s = encode_state(g);
    const ActionMask att_mask = legal_mask(g, Role::kAttacker, t);
    const ActionMask def_mask = legal_mask(g, Role::kDefender, t);

    TurnRecord rec;
    rec.turn = g.turn;
    rec.attacker = attacker.act(Observation{s, att_mask, g.turn, &g, &t}, rng);
    rec.defender = defender.act(Observation{s, def_mask, g.turn, &g, &t}, rng);

    StepResult r = step(g, checked_action(Role::kAttacker, rec.attacker, n, att_mask),
                        checked_action(Role::kDefender, rec.defender, n, def_mask), reward, t, turn_limit);
    attacker.observe(r.attacker, rec.turn);
    defender.observe(r.defender, rec.turn);
    rec.attacker_loss = attacker.learn(rec.turn, rng);
    rec.defender_loss = defender.learn(rec.turn, rng);
    rec.attacker_experience = std::move(r.attacker);
    rec.defender_experience = std::move(r.defender);

    g = std::move(r.next);
    if (hooks.on_turn) hooks.on_turn(rec, g);
  }

  GameResult out;
  out.winner = g.winner;
  out.win_turn = g.turn;
  out.final_state = std::move(g);
  return out;
}

}  // namespace ctf
