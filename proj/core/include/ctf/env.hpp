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
#include <string>
#include <string_view>
#include <vector>

#include "ctf/topology.hpp"

namespace ctf {

// Binary observation: node-compromise bits in host order, then link-up bits
// in link order (80 entries on the canonical topology).
using StateVector = std::vector<std::uint8_t>;

// One flag per action index; nonzero means legal.
using ActionMask = std::vector<std::uint8_t>;

enum class Role : std::uint8_t { kAttacker, kDefender };
enum class Winner : std::uint8_t { kNone, kAttacker, kDefender };
enum class ActionKind : std::uint8_t { kNoOp, kCompromise, kIsolate, kRestore, kPatch };

std::string_view to_string(Role r);
std::string_view to_string(Winner w);
std::string_view to_string(ActionKind k);
Role role_from_string(std::string_view s);
ActionKind action_kind_from_string(std::string_view s);

struct Action {
  Role role = Role::kAttacker;
  ActionKind kind = ActionKind::kNoOp;
  HostId host = -1;

  static Action noop(Role r) { return {r, ActionKind::kNoOp, -1}; }
  bool operator==(const Action&) const = default;
};

struct GameState {
  std::vector<std::uint8_t> node_compromised;
  std::vector<std::uint8_t> link_up;
  int turn = 0;
  Winner winner = Winner::kNone;

  bool terminal() const { return winner != Winner::kNone; }
  bool operator==(const GameState&) const = default;
};

// One stored transition. `terminal` marks that next_state ended the game.
struct Experience {
  StateVector state;
  int action = 0;
  double reward = 0.0;
  StateVector next_state;
  bool terminal = false;

  bool operator==(const Experience&) const = default;
};

struct RewardConfig {
  double flag_capture_reward = 100.0;
  double attacker_eliminated_reward = 100.0;
  double per_step_cost = 0.1;
  double invalid_action_penalty = 1.0;
  double collateral_isolation_penalty = 0.5;

  // Throws ConfigError unless flag_capture_reward > 0 and per_step_cost >= 0.
  void validate() const;
  bool operator==(const RewardConfig&) const = default;
};

// Fixed-width action index spaces, ordered by kind then host id:
//   attacker: 0 = no-op, 1 + h = compromise(h)
//   defender: 0 = no-op, 1 + h = isolate(h), 1 + n + h = restore(h),
//             1 + 2n + h = patch(h)
int action_space_size(Role role, int host_count);
int action_index(const Action& a, int host_count);
Action action_from_index(Role role, int index, int host_count);

StateVector encode_state(const GameState& g);

// Inverse of encode_state on the node and link fields; turn and winner are
// not encoded and come back as 0 / kNone.
GameState decode_state(const StateVector& v, const Topology& t);

// Fresh game: all links up, entry point (run_index mod #entries) compromised.
GameState reset(const Topology& t, int run_index);

// Uncompromised hosts sharing an up link with a compromised host, ascending.
std::vector<HostId> attack_frontier(const GameState& g, const Topology& t);

// Throws ContractViolation on a terminal state.
std::vector<Action> legal_actions(const GameState& g, Role role, const Topology& t);

ActionMask legal_mask(const GameState& g, Role role, const Topology& t);
ActionMask legal_mask(const StateVector& v, Role role, const Topology& t);

// Every compromised host has all of its links down (vacuously true when
// nothing is compromised).
bool attacker_eliminated(const GameState& g, const Topology& t);

Winner check_winner(const GameState& g, int turn_limit, const Topology& t);

// Reward for `role` taking action index `action` in s and observing s_next.
// Pure in its arguments so it can be re-evaluated on a tampered transition.
double transition_reward(Role role, const StateVector& s, int action, const StateVector& s_next,
                         const RewardConfig& cfg, const Topology& t);

struct StepResult {
  GameState next;
  Experience attacker;
  Experience defender;
};

// One turn: the attacker moves, then the defender. If the attacker captures
// the flag the defender's move is not applied. Illegal actions act as no-ops
// and are charged invalid_action_penalty. Throws ContractViolation on a
// terminal state.
StepResult step(const GameState& g, const Action& attacker_action, const Action& defender_action,
                const RewardConfig& cfg, const Topology& t, int turn_limit);

}  // namespace ctf
