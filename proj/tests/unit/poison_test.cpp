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

#include <algorithm>
#include <optional>
#include <sstream>

#include "ctf/errors.hpp"
#include "ctf/game.hpp"
#include "ctf/poison.hpp"
#include "ctf/scripted.hpp"
#include "oracles.hpp"

namespace ctf {
namespace {

BatchQFunction as_batch(const oracle::LinearQ& q) { return [q](const Eigen::MatrixXd& x) { return q(x); }; }

// Toy with 4 node bits and 2 link bits; Q has 3 actions.
oracle::LinearQ hand_q() {
  oracle::LinearQ q;
  q.w = Eigen::MatrixXd::Zero(3, 6);
  q.w.row(0) << 1.0, -2.0, 0.5, 0.0, 0.0, 0.0;
  q.w.row(1) << 0.0, 1.0, -1.0, 3.0, 0.0, 0.0;
  q.w.row(2) << -1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  q.b = Eigen::Vector3d(0.0, -0.5, 0.25);
  return q;
}

TEST(Poison, CandidateValueZeroNet) {
  const Mlp zero = Mlp::zeros({80, 4, 97});
  const StateVector s(80, 1);
  const ActionMask mask(97, 1);
  for (int node = 0; node < 32; ++node) EXPECT_EQ(candidate_value(q_function(zero), s, node, mask), 0.0);
}

TEST(Poison, CandidateValueByHand) {
  const BatchQFunction q = as_batch(hand_q());
  const StateVector s = {1, 0, 1, 0, 1, 1};
  const ActionMask all = {1, 1, 1};
  // Flip node 0 -> x = (0,0,1,0,1,1): Q = (0.5, -1.5, 1.25) -> 1.25
  EXPECT_DOUBLE_EQ(candidate_value(q, s, 0, all), 1.25);
  // Flip node 1 -> x = (1,1,1,0,1,1): Q = (-0.5, -0.5, 0.25) -> 0.25
  EXPECT_DOUBLE_EQ(candidate_value(q, s, 1, all), 0.25);
  // Flip node 3 -> x = (1,0,1,1,1,1): Q = (1.5, 1.5, 0.25) -> 1.5; masking action 0 and 1 leaves 0.25
  EXPECT_DOUBLE_EQ(candidate_value(q, s, 3, all), 1.5);
  const ActionMask last = {0, 0, 1};
  EXPECT_DOUBLE_EQ(candidate_value(q, s, 3, last), 0.25);
  const std::vector<double> batch = candidate_values(q, s, 4, all);
  EXPECT_EQ(batch, (std::vector<double>{1.25, 0.25, candidate_value(q, s, 2, all), 1.5}));
}

TEST(Poison, ReflipRestoresValue) {
  Rng rng(1);
  const Mlp m({80, 8, 97}, rng);
  StateVector s(80, 0);
  s[3] = 1;
  const ActionMask mask(97, 1);
  StateVector flipped = s;
  flipped[5] = 1;
  const double base = m.forward(to_input(s)).maxCoeff();
  EXPECT_NEAR(candidate_value(q_function(m), flipped, 5, mask), base, 1e-12);
}

TEST(Poison, ZeroLimitLeavesExperience) {
  Experience e;
  e.state = {1, 0, 0, 0, 1, 1};
  e.next_state = {1, 1, 0, 0, 1, 1};
  e.reward = -0.1;
  PoisonConfig cfg{.limit = 0, .q_threshold = 100.0, .enabled = true};
  const auto [out, outcome] = poison_experience(as_batch(hand_q()), e, cfg, 4, ActionMask{1, 1, 1}, {});
  EXPECT_EQ(out, e);
  EXPECT_TRUE(outcome.fp_nodes.empty());
  EXPECT_TRUE(outcome.fn_nodes.empty());
}

TEST(Poison, DisabledIsContractViolation) {
  Experience e;
  e.state = e.next_state = StateVector(6, 0);
  EXPECT_THROW(poison_experience(as_batch(hand_q()), e, PoisonConfig{}, 4, ActionMask{1, 1, 1}, {}),
               ContractViolation);
  PoisonConfig bad{.limit = -1, .enabled = true};
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Poison, AllCleanHasNoFalseNegatives) {
  Experience e;
  e.state = e.next_state = {0, 0, 0, 0, 1, 1};
  PoisonConfig cfg{.limit = 2, .q_threshold = 1e9, .enabled = true};
  const auto [out, outcome] = poison_experience(as_batch(hand_q()), e, cfg, 4, ActionMask{1, 1, 1}, {});
  EXPECT_TRUE(outcome.fn_nodes.empty());
  EXPECT_EQ(outcome.fp_nodes.size(), 2u);
}

TEST(Poison, HandExampleSelections) {
  // s' = (1,0,1,0 | 1,1). Single-flip values with all actions legal:
  // node0 (fn) 1.25, node1 (fp) 0.25, node2 (fn) 1.0, node3 (fp) 1.5.
  Experience e;
  e.state = {1, 0, 0, 0, 1, 1};
  e.next_state = {1, 0, 1, 0, 1, 1};
  PoisonConfig cfg{.limit = 1, .q_threshold = 2.0, .enabled = true};
  const auto [out, outcome] =
      poison_experience(as_batch(hand_q()), e, cfg, 4, ActionMask{1, 1, 1}, [](const Experience&) { return 9.0; });
  EXPECT_EQ(outcome.fp_nodes, (std::vector<int>{1}));
  EXPECT_EQ(outcome.fn_nodes, (std::vector<int>{2}));
  EXPECT_EQ(outcome.fp_scores, (std::vector<double>{0.25}));
  EXPECT_EQ(outcome.fn_scores, (std::vector<double>{1.0}));
  EXPECT_EQ(out.next_state, (StateVector{1, 1, 0, 0, 1, 1}));
  EXPECT_EQ(out.reward, 9.0);
  EXPECT_EQ(outcome.recomputed_reward, 9.0);
  EXPECT_EQ(out.state, e.state);
  EXPECT_EQ(out.action, e.action);
}

TEST(Poison, MatchesExhaustiveOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int nodes = 2 + static_cast<int>(rng.below(7));
    const int links = static_cast<int>(rng.below(4));
    const int actions = 1 + static_cast<int>(rng.below(4));
    oracle::LinearQ q;
    q.w.resize(actions, nodes + links);
    for (Eigen::Index i = 0; i < q.w.size(); ++i) q.w.data()[i] = rng.uniform(-2, 2);
    q.b.resize(actions);
    for (int a = 0; a < actions; ++a) q.b(a) = rng.uniform(-1, 1);
    Experience e;
    for (int i = 0; i < nodes + links; ++i) e.next_state.push_back(static_cast<std::uint8_t>(rng.below(2)));
    e.state = e.next_state;
    ActionMask mask(static_cast<std::size_t>(actions), 0);
    for (auto& m : mask) m = static_cast<std::uint8_t>(rng.below(2));
    mask[rng.below(mask.size())] = 1;
    PoisonConfig cfg{.limit = static_cast<int>(rng.below(4)), .q_threshold = rng.uniform(-1, 2), .enabled = true};

    const auto [out, outcome] = poison_experience(as_batch(q), e, cfg, nodes, mask, {});
    const oracle::FlipSets want = oracle::exhaustive_flip_oracle(q, e.next_state, nodes, mask, cfg.limit, cfg.q_threshold);
    ASSERT_EQ(outcome.fp_nodes, want.fp) << "trial " << trial;
    ASSERT_EQ(outcome.fn_nodes, want.fn) << "trial " << trial;
    for (std::size_t i = 0; i < outcome.fp_nodes.size(); ++i)
      EXPECT_NEAR(candidate_value(as_batch(q), e.next_state, outcome.fp_nodes[i], mask), outcome.fp_scores[i], 1e-12);
    for (std::size_t i = 0; i < outcome.fn_nodes.size(); ++i)
      EXPECT_NEAR(candidate_value(as_batch(q), e.next_state, outcome.fn_nodes[i], mask), outcome.fn_scores[i], 1e-12);
    for (int i = nodes; i < nodes + links; ++i)
      ASSERT_EQ(out.next_state[static_cast<std::size_t>(i)], e.next_state[static_cast<std::size_t>(i)]);
  }
}

AgentConfig quick_agent() {
  AgentConfig c;
  c.hidden = {32, 32};
  return c;
}

TEST(Poison, TapDisabledIsPassThrough) {
  const Topology t = Topology::build_default();
  auto mask = [&t](const StateVector& s) { return legal_mask(s, Role::kDefender, t); };
  auto reward = [&t](const Experience& e) {
    return transition_reward(Role::kDefender, e.state, e.action, e.next_state, {}, t);
  };
  Rng init_a(3), init_b(3);
  DdqnAgent plain(80, 97, quick_agent(), 200, mask, init_a);
  DdqnAgent tapped(80, 97, quick_agent(), 200, mask, init_b);
  const WhiteboxTap tap = attach_whitebox_tap(tapped, PoisonConfig{.limit = 2, .enabled = false}, 32, reward);
  RandomPlayer att_a, att_b;
  Rng ra(4), rb(4);
  play_game(t, att_a, plain, {}, 200, 0, ra);
  play_game(t, att_b, tapped, {}, 200, 0, rb);
  EXPECT_EQ(plain.buffer().contents(), tapped.buffer().contents());
  EXPECT_EQ(plain.online(), tapped.online());
  EXPECT_TRUE(tap.audit().empty());
}

TEST(Poison, TapRespectsHammingBoundAndKeepsTruth) {
  const Topology t = Topology::build_default();
  auto mask = [&t](const StateVector& s) { return legal_mask(s, Role::kDefender, t); };
  auto reward = [&t](const Experience& e) {
    return transition_reward(Role::kDefender, e.state, e.action, e.next_state, {}, t);
  };
  Rng init(5);
  N2dAgent defender(80, 97, quick_agent(), 300, mask, init);
  const WhiteboxTap tap =
      attach_whitebox_tap(defender, PoisonConfig{.limit = 2, .q_threshold = 1e9, .enabled = true}, 32, reward);
  EXPECT_THROW(attach_whitebox_tap(defender, PoisonConfig{}, 32, reward), ConfigError);
  RandomPlayer attacker;
  std::vector<Experience> truth;
  GameHooks hooks;
  hooks.on_turn = [&](const TurnRecord& tr, const GameState&) { truth.push_back(tr.defender_experience); };
  Rng rng(6);
  play_game(t, attacker, defender, {}, 300, 1, rng, hooks);

  ASSERT_EQ(defender.buffer().size(), truth.size());
  ASSERT_EQ(tap.audit().size(), truth.size());
  int flipped = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Experience& stored = defender.buffer().at(i);
    EXPECT_EQ(stored.state, truth[i].state);
    int node_diff = 0;
    for (std::size_t b = 0; b < 80; ++b) {
      if (stored.next_state[b] == truth[i].next_state[b]) continue;
      ASSERT_LT(b, 32u) << "link bit changed at turn " << i;
      ++node_diff;
      const bool was_compromised = truth[i].next_state[b] != 0;
      const auto& list = was_compromised ? tap.audit()[i].fn_nodes : tap.audit()[i].fp_nodes;
      EXPECT_NE(std::find(list.begin(), list.end(), static_cast<int>(b)), list.end());
    }
    EXPECT_LE(node_diff, 4);
    EXPECT_EQ(node_diff, tap.audit()[i].node_bits_changed);
    EXPECT_EQ(tap.audit()[i].link_bits_changed, 0);
    EXPECT_DOUBLE_EQ(stored.reward,
                     transition_reward(Role::kDefender, stored.state, stored.action, stored.next_state, {}, t));
    flipped += node_diff;
  }
  // With an unbounded threshold every turn injects the full budget.
  EXPECT_GT(flipped, 0);
}

TEST(Poison, TapDoesNotChangeFirstDecision) {
  const Topology t = Topology::build_default();
  auto mask = [&t](const StateVector& s) { return legal_mask(s, Role::kDefender, t); };
  auto reward = [&t](const Experience& e) {
    return transition_reward(Role::kDefender, e.state, e.action, e.next_state, {}, t);
  };
  std::vector<GameState> traces[2];
  for (int tapped = 0; tapped < 2; ++tapped) {
    Rng init(8);
    DdqnAgent defender(80, 97, quick_agent(), 100, mask, init);
    std::optional<WhiteboxTap> tap;
    if (tapped) tap = attach_whitebox_tap(defender, PoisonConfig{.limit = 2, .q_threshold = 1e9, .enabled = true}, 32, reward);
    RandomPlayer attacker;
    GameHooks hooks;
    hooks.on_turn = [&](const TurnRecord&, const GameState& g) { traces[tapped].push_back(g); };
    Rng rng(9);
    play_game(t, attacker, defender, {}, 100, 0, rng, hooks);
  }
  ASSERT_FALSE(traces[0].empty());
  ASSERT_FALSE(traces[1].empty());
  EXPECT_EQ(traces[0][0], traces[1][0]);
}

TEST(Poison, AuditCsv) {
  PoisonAuditEntry a;
  a.turn = 3;
  a.fp_nodes = {4, 9};
  a.fn_nodes = {1};
  a.fp_scores = {-0.5, 0.25};
  a.fn_scores = {0.75};
  std::ostringstream out;
  write_audit_csv(out, {a});
  EXPECT_EQ(out.str(), "# ctf-arena poison-audit v1\nturn,fp_nodes,fn_nodes,v_scores\n3,4;9,1,-0.5;0.25;0.75\n");
}

}  // namespace
}  // namespace ctf
