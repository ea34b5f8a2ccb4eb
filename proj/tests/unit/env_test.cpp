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

#include <gtest/gtest.h>

#include <numeric>

#include "ctf/env.hpp"
#include "ctf/errors.hpp"
#include "ctf/rng.hpp"

namespace ctf {
namespace {

// 0 - 1, 0 - 2, 2 - 3; host 3 holds the flag.
Topology toy4() { return Topology(4, {{0, 1, true}, {0, 2, true}, {2, 3, true}}, {{0, 1, 2, 3}}, 3, {0}); }

int count_ones(const StateVector& v, std::size_t from, std::size_t to) {
  return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(to), 0);
}

TEST(Env, FreshStateEncoding) {
  const Topology t = Topology::build_default();
  const StateVector v = encode_state(reset(t, 0));
  ASSERT_EQ(v.size(), 80u);
  EXPECT_EQ(count_ones(v, 0, 32), 1);
  EXPECT_EQ(count_ones(v, 32, 80), 48);
  EXPECT_EQ(v[1], 1);
}

TEST(Env, AllZeroEncoding) {
  GameState g;
  g.node_compromised.assign(32, 0);
  g.link_up.assign(48, 0);
  EXPECT_EQ(encode_state(g), StateVector(80, 0));
}

TEST(Env, EncodeDecodeRoundTrip) {
  const Topology t = Topology::build_default();
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    GameState g;
    for (int h = 0; h < 32; ++h) g.node_compromised.push_back(static_cast<std::uint8_t>(rng.below(2)));
    for (int l = 0; l < 48; ++l) g.link_up.push_back(static_cast<std::uint8_t>(rng.below(2)));
    const GameState d = decode_state(encode_state(g), t);
    EXPECT_EQ(d.node_compromised, g.node_compromised);
    EXPECT_EQ(d.link_up, g.link_up);
  }
  EXPECT_THROW(decode_state(StateVector(79, 0), t), DomainError);
}

TEST(Env, ResetCyclesEntryPoints) {
  const Topology t = Topology::build_default();
  const GameState g0 = reset(t, 0);
  EXPECT_EQ(g0.node_compromised[1], 1);
  EXPECT_EQ(g0.turn, 0);
  EXPECT_EQ(g0.winner, Winner::kNone);
  EXPECT_EQ(reset(t, 1).node_compromised[7], 1);
  EXPECT_EQ(reset(t, 2).node_compromised[15], 1);
  EXPECT_EQ(reset(t, 3), g0);
  for (int r = 0; r < 9; ++r) {
    const GameState g = reset(t, r);
    EXPECT_EQ(g.turn, 0);
    EXPECT_EQ(g.winner, Winner::kNone);
    EXPECT_EQ(std::accumulate(g.link_up.begin(), g.link_up.end(), 0), 48);
  }
}

TEST(Env, AttackerWithoutFootholdOnlyNoOp) {
  const Topology t = toy4();
  GameState g;
  g.node_compromised.assign(4, 0);
  g.link_up.assign(3, 1);
  const auto acts = legal_actions(g, Role::kAttacker, t);
  ASSERT_EQ(acts.size(), 1u);
  EXPECT_EQ(acts[0].kind, ActionKind::kNoOp);
}

TEST(Env, AttackerFrontierOnToy) {
  const Topology t = toy4();
  const GameState g = reset(t, 0);
  const auto acts = legal_actions(g, Role::kAttacker, t);
  ASSERT_EQ(acts.size(), 3u);
  EXPECT_EQ(acts[1], (Action{Role::kAttacker, ActionKind::kCompromise, 1}));
  EXPECT_EQ(acts[2], (Action{Role::kAttacker, ActionKind::kCompromise, 2}));
  const ActionMask mask = legal_mask(g, Role::kAttacker, t);
  EXPECT_EQ(mask, (ActionMask{1, 0, 1, 1, 0}));
}

TEST(Env, DefenderActionsAlwaysIncludeNoOp) {
  const Topology t = Topology::build_default();
  for (int r = 0; r < 3; ++r) {
    const auto acts = legal_actions(reset(t, r), Role::kDefender, t);
    EXPECT_EQ(acts.front().kind, ActionKind::kNoOp);
    EXPECT_EQ(acts.size(), 1u + 31 + 32 + 32);
  }
  const ActionMask mask = legal_mask(reset(t, 0), Role::kDefender, t);
  EXPECT_EQ(mask.size(), 97u);
  EXPECT_EQ(mask[1 + 31], 0);
}

TEST(Env, LegalActionsRejectTerminal) {
  const Topology t = toy4();
  GameState g = reset(t, 0);
  g.winner = Winner::kDefender;
  EXPECT_THROW(legal_actions(g, Role::kAttacker, t), ContractViolation);
  EXPECT_THROW(step(g, Action::noop(Role::kAttacker), Action::noop(Role::kDefender), {}, t, 10), ContractViolation);
}

TEST(Env, ActionIndexRoundTrip) {
  for (Role role : {Role::kAttacker, Role::kDefender}) {
    for (int i = 0; i < action_space_size(role, 32); ++i) EXPECT_EQ(action_index(action_from_index(role, i, 32), 32), i);
  }
  EXPECT_THROW(action_from_index(Role::kAttacker, 33, 32), DomainError);
}

TEST(Env, BothNoOpIsIdentityPlusTurn) {
  const Topology t = Topology::build_default();
  const GameState g = reset(t, 0);
  const RewardConfig cfg;
  const StepResult r = step(g, Action::noop(Role::kAttacker), Action::noop(Role::kDefender), cfg, t, 5000);
  EXPECT_EQ(r.next.node_compromised, g.node_compromised);
  EXPECT_EQ(r.next.link_up, g.link_up);
  EXPECT_EQ(r.next.turn, 1);
  EXPECT_DOUBLE_EQ(r.attacker.reward, -cfg.per_step_cost);
  EXPECT_DOUBLE_EQ(r.defender.reward, -cfg.per_step_cost);
}

TEST(Env, FlagCaptureWinsForAttacker) {
  const Topology t = toy4();
  GameState g = reset(t, 0);
  g.node_compromised[2] = 1;
  const RewardConfig cfg;
  const StepResult r = step(g, {Role::kAttacker, ActionKind::kCompromise, 3}, {Role::kDefender, ActionKind::kIsolate, 2},
                            cfg, t, 100);
  EXPECT_EQ(r.next.winner, Winner::kAttacker);
  EXPECT_TRUE(r.attacker.terminal);
  EXPECT_DOUBLE_EQ(r.attacker.reward, cfg.flag_capture_reward - cfg.per_step_cost);
  EXPECT_DOUBLE_EQ(r.defender.reward, -cfg.flag_capture_reward - cfg.per_step_cost);
  // The defender's move is void once the flag falls.
  EXPECT_EQ(r.next.link_up, g.link_up);
}

TEST(Env, PatchingIsolatedLastHostWinsForDefender) {
  const Topology t(2, {{0, 1, false}}, {{0, 1}}, 1, {0});
  GameState g = reset(t, 0);
  g.link_up[0] = 0;
  const StepResult r =
      step(g, Action::noop(Role::kAttacker), {Role::kDefender, ActionKind::kPatch, 0}, RewardConfig{}, t, 100);
  EXPECT_EQ(r.next.winner, Winner::kDefender);
  EXPECT_EQ(r.next.node_compromised, (std::vector<std::uint8_t>{0, 0}));
}

TEST(Env, CheckWinnerRules) {
  const Topology t = Topology::build_default();
  GameState g = reset(t, 0);
  EXPECT_EQ(check_winner(g, 5000, t), Winner::kNone);
  g.node_compromised[31] = 1;
  EXPECT_EQ(check_winner(g, 5000, t), Winner::kAttacker);
  g.node_compromised.assign(32, 0);
  EXPECT_EQ(check_winner(g, 5000, t), Winner::kDefender);
  g = reset(t, 0);
  g.turn = 5000;
  EXPECT_EQ(check_winner(g, 5000, t), Winner::kDefender);
  g.turn = 4999;
  EXPECT_EQ(check_winner(g, 5000, t), Winner::kNone);
}

TEST(Env, OutlastAtTurnLimit) {
  const Topology t = Topology::build_default();
  GameState g = reset(t, 0);
  for (int i = 0; i < 5000; ++i) {
    ASSERT_FALSE(g.terminal());
    g = step(g, Action::noop(Role::kAttacker), Action::noop(Role::kDefender), {}, t, 5000).next;
  }
  EXPECT_EQ(g.winner, Winner::kDefender);
  EXPECT_EQ(g.turn, 5000);
}

TEST(Env, IsolateRestoreAndCollateral) {
  const Topology t = Topology::build_default();
  const GameState g = reset(t, 0);
  const RewardConfig cfg;
  // Isolating the clean host 5 costs collateral.
  StepResult r = step(g, Action::noop(Role::kAttacker), {Role::kDefender, ActionKind::kIsolate, 5}, cfg, t, 5000);
  for (LinkId id : t.incident_links(5)) EXPECT_EQ(r.next.link_up[static_cast<std::size_t>(id)], 0);
  EXPECT_DOUBLE_EQ(r.defender.reward, -cfg.per_step_cost - cfg.collateral_isolation_penalty);
  r = step(r.next, Action::noop(Role::kAttacker), {Role::kDefender, ActionKind::kRestore, 5}, cfg, t, 5000);
  EXPECT_EQ(r.next.link_up, g.link_up);
}

TEST(Env, IsolatingTheFootholdEliminatesAttacker) {
  const Topology t = Topology::build_default();
  const RewardConfig cfg;
  const StepResult r =
      step(reset(t, 0), Action::noop(Role::kAttacker), {Role::kDefender, ActionKind::kIsolate, 1}, cfg, t, 5000);
  EXPECT_EQ(r.next.winner, Winner::kDefender);
  EXPECT_DOUBLE_EQ(r.defender.reward, cfg.attacker_eliminated_reward - cfg.per_step_cost);
  EXPECT_DOUBLE_EQ(r.attacker.reward, -cfg.attacker_eliminated_reward - cfg.per_step_cost);
}

TEST(Env, InvalidActionsScoredAsNoOp) {
  const Topology t = Topology::build_default();
  const GameState g = reset(t, 0);
  const RewardConfig cfg;
  const StepResult r = step(g, {Role::kAttacker, ActionKind::kCompromise, 20}, {Role::kDefender, ActionKind::kIsolate, 31},
                            cfg, t, 5000);
  EXPECT_EQ(r.next.node_compromised, g.node_compromised);
  EXPECT_EQ(r.next.link_up, g.link_up);
  EXPECT_DOUBLE_EQ(r.attacker.reward, -cfg.per_step_cost - cfg.invalid_action_penalty);
  EXPECT_DOUBLE_EQ(r.defender.reward, -cfg.per_step_cost - cfg.invalid_action_penalty);
}

TEST(Env, StepFlipsAtMostOneNodePerAttackerMove) {
  const Topology t = Topology::build_default();
  Rng rng(17);
  const int n = t.host_count();
  for (int game = 0; game < 20; ++game) {
    GameState g = reset(t, game);
    while (!g.terminal()) {
      const auto am = legal_actions(g, Role::kAttacker, t);
      const auto dm = legal_actions(g, Role::kDefender, t);
      const Action a = am[rng.below(am.size())];
      const Action d = dm[rng.below(dm.size())];
      const StepResult r = step(g, a, d, {}, t, 300);
      int newly = 0;
      for (int h = 0; h < n; ++h) newly += !g.node_compromised[h] && r.next.node_compromised[h];
      ASSERT_LE(newly, 1);
      if (newly == 1) {
        ASSERT_EQ(a.kind, ActionKind::kCompromise);
      }
      ASSERT_LE(r.next.turn, 300);
      g = r.next;
    }
  }
}

TEST(Env, TransitionRewardIsPure) {
  const Topology t = Topology::build_default();
  const GameState g = reset(t, 0);
  const StepResult r = step(g, {Role::kAttacker, ActionKind::kCompromise, 0}, {Role::kDefender, ActionKind::kIsolate, 5},
                            {}, t, 5000);
  EXPECT_DOUBLE_EQ(transition_reward(Role::kDefender, r.defender.state, r.defender.action, r.defender.next_state, {}, t),
                   r.defender.reward);
  EXPECT_DOUBLE_EQ(transition_reward(Role::kAttacker, r.attacker.state, r.attacker.action, r.attacker.next_state, {}, t),
                   r.attacker.reward);
}

TEST(Env, RewardConfigValidation) {
  RewardConfig c;
  c.flag_capture_reward = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.per_step_cost = -1;
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace ctf
