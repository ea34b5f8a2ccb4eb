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

#include <benchmark/benchmark.h>

#include "ctf/agents.hpp"
#include "ctf/dnd.hpp"
#include "ctf/env.hpp"
#include "ctf/mlp.hpp"
#include "ctf/poison.hpp"

namespace {

using namespace ctf;

Eigen::MatrixXd random_states(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = static_cast<double>(rng.below(2));
  return x;
}

void BM_Forward(benchmark::State& state) {
  Rng rng(1);
  const Mlp m({80, 128, 128, 97}, rng);
  const Eigen::MatrixXd x = random_states(80, static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(m.forward_batch(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(32);

void BM_TrainBatch(benchmark::State& state) {
  Rng rng(2);
  Mlp m({80, 128, 128, 97}, rng);
  const Eigen::MatrixXd x = random_states(80, 32, rng);
  std::vector<int> actions(32);
  std::vector<double> targets(32);
  for (int i = 0; i < 32; ++i) {
    actions[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(97));
    targets[static_cast<std::size_t>(i)] = rng.uniform(-1, 1);
  }
  for (auto _ : state) benchmark::DoNotOptimize(m.train_batch(x, actions, targets, 1e-4));
}
BENCHMARK(BM_TrainBatch);

void BM_DndLookup(benchmark::State& state) {
  Rng rng(3);
  const auto entries = static_cast<int>(state.range(0));
  DndConfig cfg;
  cfg.capacity = static_cast<std::size_t>(entries);
  Dnd dnd(128, cfg);
  for (int i = 0; i < entries; ++i) {
    Eigen::VectorXd k(128);
    for (int j = 0; j < 128; ++j) k(j) = rng.uniform(-1, 1);
    dnd.write(k, rng.uniform(-1, 1));
  }
  Eigen::VectorXd q(128);
  for (int j = 0; j < 128; ++j) q(j) = rng.uniform(-1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dnd.lookup(q));
}
BENCHMARK(BM_DndLookup)->Arg(1000)->Arg(10000);

void BM_PoisonExperience(benchmark::State& state) {
  Rng rng(4);
  const Topology t = Topology::build_default();
  const Mlp m({80, 128, 128, 97}, rng);
  GameState g = reset(t, 0);
  for (int h : {0, 3, 6, 9}) g.node_compromised[static_cast<std::size_t>(h)] = 1;
  Experience e;
  e.state = encode_state(g);
  e.next_state = e.state;
  const ActionMask mask = legal_mask(g, Role::kDefender, t);
  const PoisonConfig cfg{2, 1e9, true};
  for (auto _ : state) benchmark::DoNotOptimize(poison_experience(q_function(m), e, cfg, 32, mask, {}));
}
BENCHMARK(BM_PoisonExperience);

void BM_Step(benchmark::State& state) {
  const Topology t = Topology::build_default();
  const GameState g = reset(t, 0);
  const Action a{Role::kAttacker, ActionKind::kCompromise, 0};
  const Action d{Role::kDefender, ActionKind::kIsolate, 5};
  for (auto _ : state) benchmark::DoNotOptimize(step(g, a, d, {}, t, 5000));
}
BENCHMARK(BM_Step);

}  // namespace

BENCHMARK_MAIN();
