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

#include "ctf/errors.hpp"
#include "ctf/game.hpp"
#include "ctf/scripted.hpp"

namespace ctf {
namespace {

TEST(Scripted, HopDistancesFromFlag) {
  const Topology t = Topology::build_default();
  const auto d = hop_distances(reset(t, 0), t, t.critical_server());
  EXPECT_EQ(d[31], 0);
  EXPECT_EQ(d[3], 1);
  EXPECT_EQ(d[23], 1);
  EXPECT_EQ(d[1], 3);
  EXPECT_EQ(d[7], 4);
  EXPECT_EQ(d[15], 3);
}

TEST(Scripted, GreedyBeatsNoOpQuickly) {
  const Topology t = Topology::build_default();
  GreedyAttacker attacker;
  NoOpPlayer defender;
  for (int run = 0; run < 10; ++run) {
    Rng rng(static_cast<std::uint64_t>(run));
    const GameResult r = play_game(t, attacker, defender, {}, 5000, run, rng);
    EXPECT_EQ(r.winner, Winner::kAttacker);
    const int entry = t.entry_points()[static_cast<std::size_t>(run % 3)];
    EXPECT_EQ(r.win_turn, hop_distances(reset(t, run), t, 31)[static_cast<std::size_t>(entry)]);
  }
}

TEST(Scripted, IsolateOnSightBeatsRandom) {
  const Topology t = Topology::build_default();
  RandomPlayer attacker;
  IsolateOnSightDefender defender;
  for (int run = 0; run < 10; ++run) {
    Rng rng(50 + static_cast<std::uint64_t>(run));
    const GameResult r = play_game(t, attacker, defender, {}, 5000, run, rng);
    EXPECT_EQ(r.winner, Winner::kDefender);
    EXPECT_LT(r.win_turn, 5000);
  }
}

TEST(Scripted, FortressOutlastsGreedy) {
  const Topology t = Topology::build_default();
  GreedyAttacker attacker;
  FortressDefender defender;
  for (int run = 0; run < 3; ++run) {
    Rng rng(7);
    const GameResult r = play_game(t, attacker, defender, {}, 500, run, rng);
    EXPECT_EQ(r.winner, Winner::kDefender);
    EXPECT_EQ(r.win_turn, 500);
  }
}

TEST(Scripted, NeedGameState) {
  GreedyAttacker attacker;
  Rng rng(1);
  const StateVector s(80, 0);
  const ActionMask m(33, 1);
  EXPECT_THROW(attacker.act(Observation{s, m, 0}, rng), ContractViolation);
}

}  // namespace
}  // namespace ctf
