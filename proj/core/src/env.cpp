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

#include "ctf/env.hpp"

#include <algorithm>

#include "ctf/errors.hpp"

namespace ctf {

namespace {

void check_shape(const GameState& g, const Topology& t) {
  if (static_cast<int>(g.node_compromised.size()) != t.host_count() ||
      static_cast<int>(g.link_up.size()) != t.link_count())
    throw DomainError("game state does not match topology dimensions");
}

bool host_isolated(const GameState& g, const Topology& t, HostId h) {
  for (LinkId id : t.incident_links(h))
    if (g.link_up[static_cast<std::size_t>(id)]) return false;
  return true;
}

bool on_frontier(const GameState& g, const Topology& t, HostId h) {
  if (g.node_compromised[static_cast<std::size_t>(h)]) return false;
  for (LinkId id : t.incident_links(h)) {
    if (!g.link_up[static_cast<std::size_t>(id)]) continue;
    const Link& l = t.link(id);
    const HostId other = l.a == h ? l.b : l.a;
    if (g.node_compromised[static_cast<std::size_t>(other)]) return true;
  }
  return false;
}

bool is_legal(const GameState& g, const Action& a, const Topology& t) {
  if (a.kind == ActionKind::kNoOp) return true;
  if (a.host < 0 || a.host >= t.host_count()) return false;
  switch (a.kind) {
    case ActionKind::kCompromise:
      return a.role == Role::kAttacker && on_frontier(g, t, a.host);
    case ActionKind::kIsolate:
      return a.role == Role::kDefender && a.host != t.critical_server();
    case ActionKind::kRestore:
    case ActionKind::kPatch:
      return a.role == Role::kDefender;
    case ActionKind::kNoOp:
      break;
  }
  return true;
}

void set_host_links(GameState& g, const Topology& t, HostId h, bool up) {
  for (LinkId id : t.incident_links(h)) g.link_up[static_cast<std::size_t>(id)] = up ? 1 : 0;
}

}  // namespace

std::string_view to_string(Role r) { return r == Role::kAttacker ? "attacker" : "defender"; }

std::string_view to_string(Winner w) {
  switch (w) {
    case Winner::kAttacker: return "attacker";
    case Winner::kDefender: return "defender";
    case Winner::kNone: break;
  }
  return "none";
}

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::kCompromise: return "compromise";
    case ActionKind::kIsolate: return "isolate";
    case ActionKind::kRestore: return "restore";
    case ActionKind::kPatch: return "patch";
    case ActionKind::kNoOp: break;
  }
  return "noop";
}

Role role_from_string(std::string_view s) {
  if (s == "attacker") return Role::kAttacker;
  if (s == "defender") return Role::kDefender;
  throw DomainError("unknown role '" + std::string(s) + "'");
}

ActionKind action_kind_from_string(std::string_view s) {
  for (ActionKind k : {ActionKind::kNoOp, ActionKind::kCompromise, ActionKind::kIsolate,
                       ActionKind::kRestore, ActionKind::kPatch})
    if (to_string(k) == s) return k;
  throw DomainError("unknown action kind '" + std::string(s) + "'");
}

void RewardConfig::validate() const {
  if (!(flag_capture_reward > 0.0)) throw ConfigError("reward: flag_capture_reward must be > 0");
  if (!(per_step_cost >= 0.0)) throw ConfigError("reward: per_step_cost must be >= 0");
}

int action_space_size(Role role, int host_count) {
  return role == Role::kAttacker ? 1 + host_count : 1 + 3 * host_count;
}

int action_index(const Action& a, int n) {
  if (a.kind == ActionKind::kNoOp) return 0;
  if (a.host < 0 || a.host >= n) throw DomainError("action_index: host out of range");
  switch (a.kind) {
    case ActionKind::kCompromise:
      if (a.role != Role::kAttacker) break;
      return 1 + a.host;
    case ActionKind::kIsolate:
      if (a.role != Role::kDefender) break;
      return 1 + a.host;
    case ActionKind::kRestore:
      if (a.role != Role::kDefender) break;
      return 1 + n + a.host;
    case ActionKind::kPatch:
      if (a.role != Role::kDefender) break;
      return 1 + 2 * n + a.host;
    case ActionKind::kNoOp:
      break;
  }
  throw DomainError("action_index: action kind not available to " + std::string(to_string(a.role)));
}

Action action_from_index(Role role, int index, int n) {
  if (index < 0 || index >= action_space_size(role, n))
    throw DomainError("action_from_index: index " + std::to_string(index) + " out of range");
  if (index == 0) return Action::noop(role);
  if (role == Role::kAttacker) return {role, ActionKind::kCompromise, index - 1};
  const int k = (index - 1) / n;
  const HostId h = (index - 1) % n;
  constexpr ActionKind kinds[] = {ActionKind::kIsolate, ActionKind::kRestore, ActionKind::kPatch};
  return {role, kinds[k], h};
}

StateVector encode_state(const GameState& g) {
  StateVector v;
  v.reserve(g.node_compromised.size() + g.link_up.size());
  for (auto b : g.node_compromised) v.push_back(b ? 1 : 0);
  for (auto b : g.link_up) v.push_back(b ? 1 : 0);
  return v;
}

GameState decode_state(const StateVector& v, const Topology& t) {
  const auto n = static_cast<std::size_t>(t.host_count());
  if (v.size() != n + static_cast<std::size_t>(t.link_count()))
    throw DomainError("decode_state: vector length " + std::to_string(v.size()) + " does not match topology");
  GameState g;
  g.node_compromised.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
  g.link_up.assign(v.begin() + static_cast<std::ptrdiff_t>(n), v.end());
  return g;
}

GameState reset(const Topology& t, int run_index) {
  if (t.entry_points().empty()) throw DomainError("reset: topology has no entry points");
  GameState g;
  g.node_compromised.assign(static_cast<std::size_t>(t.host_count()), 0);
  g.link_up.assign(static_cast<std::size_t>(t.link_count()), 1);
  const int n = static_cast<int>(t.entry_points().size());
  const int slot = ((run_index % n) + n) % n;
  g.node_compromised[static_cast<std::size_t>(t.entry_points()[static_cast<std::size_t>(slot)])] = 1;
  return g;
}

std::vector<HostId> attack_frontier(const GameState& g, const Topology& t) {
  check_shape(g, t);
  std::vector<HostId> out;
  for (HostId h = 0; h < t.host_count(); ++h)
    if (on_frontier(g, t, h)) out.push_back(h);
  return out;
}

std::vector<Action> legal_actions(const GameState& g, Role role, const Topology& t) {
  if (g.terminal()) throw ContractViolation("legal_actions: game is over");
  check_shape(g, t);
  std::vector<Action> out{Action::noop(role)};
  if (role == Role::kAttacker) {
    for (HostId h : attack_frontier(g, t)) out.push_back({role, ActionKind::kCompromise, h});
    return out;
  }
  for (HostId h = 0; h < t.host_count(); ++h)
    if (h != t.critical_server()) out.push_back({role, ActionKind::kIsolate, h});
  for (HostId h = 0; h < t.host_count(); ++h) out.push_back({role, ActionKind::kRestore, h});
  for (HostId h = 0; h < t.host_count(); ++h) out.push_back({role, ActionKind::kPatch, h});
  return out;
}

ActionMask legal_mask(const GameState& g, Role role, const Topology& t) {
  check_shape(g, t);
  const int n = t.host_count();
  ActionMask mask(static_cast<std::size_t>(action_space_size(role, n)), 0);
  mask[0] = 1;
  if (role == Role::kAttacker) {
    for (HostId h = 0; h < n; ++h) mask[static_cast<std::size_t>(1 + h)] = on_frontier(g, t, h) ? 1 : 0;
  } else {
    std::fill(mask.begin() + 1, mask.end(), 1);
    mask[static_cast<std::size_t>(1 + t.critical_server())] = 0;
  }
  return mask;
}

ActionMask legal_mask(const StateVector& v, Role role, const Topology& t) {
  return legal_mask(decode_state(v, t), role, t);
}

bool attacker_eliminated(const GameState& g, const Topology& t) {
  check_shape(g, t);
  for (HostId h = 0; h < t.host_count(); ++h)
    if (g.node_compromised[static_cast<std::size_t>(h)] && !host_isolated(g, t, h)) return false;
  return true;
}

Winner check_winner(const GameState& g, int turn_limit, const Topology& t) {
  check_shape(g, t);
  if (g.node_compromised[static_cast<std::size_t>(t.critical_server())]) return Winner::kAttacker;
  if (attacker_eliminated(g, t)) return Winner::kDefender;
  if (g.turn >= turn_limit) return Winner::kDefender;
  return Winner::kNone;
}

double transition_reward(Role role, const StateVector& s, int action, const StateVector& s_next,
                         const RewardConfig& cfg, const Topology& t) {
  const GameState before = decode_state(s, t);
  const GameState after = decode_state(s_next, t);
  const ActionMask mask = legal_mask(before, role, t);
  if (action < 0 || action >= static_cast<int>(mask.size()))
    throw DomainError("transition_reward: action index out of range");

  double r = -cfg.per_step_cost;
  const bool valid = mask[static_cast<std::size_t>(action)] != 0;
  if (!valid) r -= cfg.invalid_action_penalty;

  const bool captured = after.node_compromised[static_cast<std::size_t>(t.critical_server())] != 0;
  const bool eliminated = !captured && attacker_eliminated(after, t);
  if (role == Role::kAttacker) {
    if (captured) r += cfg.flag_capture_reward;
    if (eliminated) r -= cfg.attacker_eliminated_reward;
    return r;
  }

  if (captured) r -= cfg.flag_capture_reward;
  if (eliminated) r += cfg.attacker_eliminated_reward;
  if (valid) {
    const Action a = action_from_index(role, action, t.host_count());
    if (a.kind == ActionKind::kIsolate && !after.node_compromised[static_cast<std::size_t>(a.host)] &&
        host_isolated(after, t, a.host))
      r -= cfg.collateral_isolation_penalty;
  }
  return r;
}

StepResult step(const GameState& g, const Action& attacker_action, const Action& defender_action,
                const RewardConfig& cfg, const Topology& t, int turn_limit) {
  if (g.terminal()) throw ContractViolation("step: game is over");
  check_shape(g, t);
  if (attacker_action.role != Role::kAttacker || defender_action.role != Role::kDefender)
    throw DomainError("step: actions passed for the wrong roles");

  GameState next = g;
  if (is_legal(g, attacker_action, t) && attacker_action.kind == ActionKind::kCompromise)
    next.node_compromised[static_cast<std::size_t>(attacker_action.host)] = 1;

  const bool captured = next.node_compromised[static_cast<std::size_t>(t.critical_server())] != 0;
  if (!captured && is_legal(g, defender_action, t)) {
    const HostId h = defender_action.host;
    switch (defender_action.kind) {
      case ActionKind::kIsolate: set_host_links(next, t, h, false); break;
      case ActionKind::kRestore: set_host_links(next, t, h, true); break;
      case ActionKind::kPatch: next.node_compromised[static_cast<std::size_t>(h)] = 0; break;
      default: break;
    }
  }

  next.turn = g.turn + 1;
  next.winner = check_winner(next, turn_limit, t);

  const StateVector s = encode_state(g);
  const StateVector s_next = encode_state(next);
  const int n = t.host_count();
  const int ai = action_index(attacker_action, n);
  const int di = action_index(defender_action, n);

  StepResult out;
  out.attacker = {s, ai, transition_reward(Role::kAttacker, s, ai, s_next, cfg, t), s_next, next.terminal()};
  out.defender = {s, di, transition_reward(Role::kDefender, s, di, s_next, cfg, t), s_next, next.terminal()};
  out.next = std::move(next);
  return out;
}

}  // namespace ctf
