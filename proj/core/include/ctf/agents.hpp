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

#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ctf/dnd.hpp"
#include "ctf/env.hpp"
#include "ctf/mlp.hpp"
#include "ctf/replay_buffer.hpp"
#include "ctf/rng.hpp"

namespace ctf {

enum class Algorithm : std::uint8_t { kDdqn, kN2d };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view s);

// Which value function drove a decision.
enum class ActionSource : std::uint8_t { kDqn, kNec, kScripted };
std::string_view to_string(ActionSource s);

struct AgentConfig {
  std::vector<int> hidden = {128, 128};
  double gamma = 0.99;
  double learning_rate = 1e-3;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.1;  // of the game's turn budget
  std::size_t replay_capacity = 100000;
  std::size_t batch_size = 32;
  int target_sync_period = 500;  // in gradient updates
  int n_step = 5;
  DndConfig dnd;
  // N2D source selection before the change step: false spreads DQN turns
  // evenly at rate turn/CS (error diffusion), true draws each turn at random.
  bool random_blend = false;

  // Throws ConfigError.
  void validate() const;
  bool operator==(const AgentConfig&) const = default;
};

// Linear decay from epsilon_start to epsilon_end over the first
// epsilon_decay_fraction of total_turns, then constant.
double epsilon_at(const AgentConfig& cfg, int turn, int total_turns);

// Turn after which N2D stops consulting its dictionaries: floor(0.2 * total).
int change_step(int total_turns);

// Probability that the DQN side drives a decision: min(turn / CS, 1).
double dqn_selection_probability(int turn, int change_step);

// Weight of the NEC term in N2D targets: 1 - min(turn / CS, 1).
double nec_target_weight(int turn, int change_step);

double blend_target(double nec_weight, double nec_target, double ddqn_target);

// Epsilon-greedy over the legal entries of `mask`; greedy ties go to the
// lowest index. Throws ContractViolation when nothing is legal.
int select_action(const Eigen::VectorXd& values, std::span<const std::uint8_t> mask, double epsilon, Rng& rng);

// Greedy legal argmax, lowest index on ties.
int masked_argmax(const Eigen::VectorXd& values, std::span<const std::uint8_t> mask);

// r + gamma * Q_target(s', argmax_legal Q_online(s', .)); r when terminal.
double ddqn_target_from_values(double reward, bool terminal, double gamma, const Eigen::VectorXd& online_next,
                               const Eigen::VectorXd& target_next, std::span<const std::uint8_t> next_mask);
double ddqn_target(double reward, const StateVector& next_state, bool terminal, double gamma, const Mlp& online,
                   const Mlp& target, std::span<const std::uint8_t> next_mask);

// sum_j gamma^j r_j + gamma^len(rewards) * bootstrap.
double n_step_return(std::span<const double> rewards, double gamma, double bootstrap);

Eigen::VectorXd to_input(const StateVector& s);

// Read-only view of the game handed to a player each turn.
struct Observation {
  const StateVector& state;
  const ActionMask& mask;
  int turn;
  const GameState* game = nullptr;
  const Topology* topology = nullptr;
};

struct Decision {
  int action = 0;
  ActionSource source = ActionSource::kDqn;
  double epsilon = 0.0;
};

class Player {
 public:
  virtual ~Player() = default;

  virtual std::string_view name() const = 0;
  virtual void begin_game(int total_turns) { (void)total_turns; }
  virtual Decision act(const Observation& obs, Rng& rng) = 0;
  virtual void observe(const Experience& e, int turn) {
    (void)e;
    (void)turn;
  }
  virtual std::optional<double> learn(int turn, Rng& rng) {
    (void)turn;
    (void)rng;
    return std::nullopt;
  }
};

using MaskFn = std::function<ActionMask(const StateVector&)>;
using ExperienceFilter = std::function<Experience(const Experience&, int turn)>;

// Shared machinery of the Q-network learners: online/target networks, the
// replay buffer, the epsilon schedule and the experience-filter slot used by
// the white-box tap.
class LearningAgent : public Player {
 public:
  LearningAgent(int input_size, int action_count, AgentConfig cfg, int total_turns, MaskFn next_mask, Rng& init_rng);

  virtual Algorithm algorithm() const = 0;
  std::string_view name() const override { return to_string(algorithm()); }

  void begin_game(int total_turns) override;
  void observe(const Experience& e, int turn) final;

  // Throws ConfigError if a filter is already installed.
  void set_experience_filter(ExperienceFilter filter);
  bool has_experience_filter() const { return static_cast<bool>(filter_); }

  const AgentConfig& config() const { return cfg_; }
  int total_turns() const { return total_turns_; }
  int action_count() const { return action_count_; }
  double epsilon(int turn) const { return epsilon_at(cfg_, turn, total_turns_); }

  const Mlp& online() const { return online_; }
  Mlp& online() { return online_; }
  const Mlp& target() const { return target_; }
  Mlp& target() { return target_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  long updates() const { return updates_; }

  ActionMask next_mask(const StateVector& s) const { return next_mask_(s); }

 protected:
  virtual void store(const Experience& e);

  // Forward passes shared by the DDQN and N2D updates.
  struct BatchView {
    Eigen::MatrixXd states;
    Eigen::MatrixXd next_states;
    Eigen::MatrixXd online_next;
    Eigen::MatrixXd target_next;
    std::vector<int> actions;
    std::vector<double> ddqn_targets;
  };
  BatchView prepare(std::span<const Experience* const> batch) const;
  double apply_update(const BatchView& view, std::span<const double> targets);

  AgentConfig cfg_;
  int total_turns_;
  int action_count_;
  MaskFn next_mask_;
  Mlp online_;
  Mlp target_;
  ReplayBuffer buffer_;
  ExperienceFilter filter_;
  long updates_ = 0;
};

class DdqnAgent final : public LearningAgent {
 public:
  using LearningAgent::LearningAgent;

  Algorithm algorithm() const override { return Algorithm::kDdqn; }
  Decision act(const Observation& obs, Rng& rng) override;
  std::optional<double> learn(int turn, Rng& rng) override;

  // One gradient step toward ddqn targets; syncs the target net every
  // target_sync_period updates. Returns the pre-step loss.
  double update(std::span<const Experience* const> batch);
};

// NEC2DQN: per-action episodic dictionaries keyed by the online network's
// first hidden layer drive decisions early; the DQN side takes over
// gradually and exclusively from the change step on. The dictionaries keep
// receiving N-step writes for the whole game.
class N2dAgent final : public LearningAgent {
 public:
  N2dAgent(int input_size, int action_count, AgentConfig cfg, int total_turns, MaskFn next_mask, Rng& init_rng);

  Algorithm algorithm() const override { return Algorithm::kN2d; }
  void begin_game(int total_turns) override;
  Decision act(const Observation& obs, Rng& rng) override;
  std::optional<double> learn(int turn, Rng& rng) override;

  int change_step() const { return change_step_; }
  const Dnd& dictionary(int action) const { return dictionaries_.at(static_cast<std::size_t>(action)); }

  // Dictionary estimate per action (0 for actions whose dictionary is
  // empty); entries outside the mask are left at 0.
  Eigen::VectorXd nec_values(const StateVector& s, std::span<const std::uint8_t> mask);

  // Writes the N-step return of `window` under (embed(window[0].state),
  // window[0].action). Bootstraps from the best legal dictionary estimate of
  // the last next-state unless it is terminal.
  void nec_update(std::span<const Experience> window);

  // DQN step toward blend_target(nec weight, r + gamma * NEC(s', a'),
  // ddqn target) with a' the online greedy action in s'. Samples whose
  // dictionary for a' is empty use the ddqn target alone.
  double update(std::span<const Experience* const> batch, int turn);

 protected:
  void store(const Experience& e) override;

 private:
  int change_step_;
  std::vector<Dnd> dictionaries_;
  std::deque<Experience> pending_;
  double blend_credit_ = 0.0;
};

}  // namespace ctf
