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

#include "ctf/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctf/errors.hpp"

namespace ctf {

std::string_view to_string(Algorithm a) { return a == Algorithm::kDdqn ? "DDQN" : "N2D"; }

Algorithm algorithm_from_string(std::string_view s) {
  if (s == "DDQN") return Algorithm::kDdqn;
  if (s == "N2D") return Algorithm::kN2d;
  throw DomainError("unknown algorithm '" + std::string(s) + "'");
}

std::string_view to_string(ActionSource s) {
  switch (s) {
    case ActionSource::kNec: return "nec";
    case ActionSource::kScripted: return "scripted";
    case ActionSource::kDqn: break;
  }
  return "dqn";
}

void AgentConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("agent: gamma must be in (0, 1]");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 && epsilon_end <= 1.0))
    throw ConfigError("agent: epsilon endpoints must be in [0, 1]");
  if (!(epsilon_decay_fraction >= 0.0)) throw ConfigError("agent: epsilon_decay_fraction must be >= 0");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw ConfigError("agent: bad learning rate");
  if (replay_capacity == 0 || batch_size == 0 || batch_size > replay_capacity)
    throw ConfigError("agent: need 0 < batch_size <= replay_capacity");
  if (target_sync_period < 1) throw ConfigError("agent: target_sync_period must be >= 1");
  if (n_step < 1) throw ConfigError("agent: n_step must be >= 1");
  for (int w : hidden)
    if (w <= 0) throw ConfigError("agent: hidden widths must be positive");
  if (dnd.neighbors < 1 || dnd.capacity < 1 || !(dnd.smoothing > 0.0))
    throw ConfigError("agent: bad dictionary settings");
}

double epsilon_at(const AgentConfig& cfg, int turn, int total_turns) {
  const double horizon = cfg.epsilon_decay_fraction * static_cast<double>(total_turns);
  if (!(horizon > 0.0)) return cfg.epsilon_end;
  const double frac = static_cast<double>(std::max(turn, 0)) / horizon;
  if (frac >= 1.0) return cfg.epsilon_end;
  return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;
}

int change_step(int total_turns) { return std::max(total_turns, 0) / 5; }

double dqn_selection_probability(int turn, int cs) {
  if (cs <= 0) return 1.0;
  return std::min(static_cast<double>(std::max(turn, 0)) / static_cast<double>(cs), 1.0);
}

double nec_target_weight(int turn, int cs) { return 1.0 - dqn_selection_probability(turn, cs); }

double blend_target(double nec_weight, double nec_target, double ddqn_target) {
  return nec_weight * nec_target + (1.0 - nec_weight) * ddqn_target;
}

int masked_argmax(const Eigen::VectorXd& values, std::span<const std::uint8_t> mask) {
  if (static_cast<std::size_t>(values.size()) != mask.size())
    throw DomainError("masked_argmax: values and mask differ in length");
  int best = -1;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    if (best < 0 || values(static_cast<Eigen::Index>(i)) > values(best)) best = static_cast<int>(i);
  }
  if (best < 0) throw ContractViolation("select_action: no legal action");
  return best;
}

int select_action(const Eigen::VectorXd& values, std::span<const std::uint8_t> mask, double epsilon, Rng& rng) {
  const auto legal = static_cast<std::uint64_t>(std::count_if(mask.begin(), mask.end(), [](auto m) { return m != 0; }));
  if (legal == 0) throw ContractViolation("select_action: no legal action");
  if (rng.uniform() < epsilon) {
    std::uint64_t k = rng.below(legal);
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i] && k-- == 0) return static_cast<int>(i);
  }
  return masked_argmax(values, mask);
}

double ddqn_target_from_values(double reward, bool terminal, double gamma, const Eigen::VectorXd& online_next,
                               const Eigen::VectorXd& target_next, std::span<const std::uint8_t> next_mask) {
  if (terminal) return reward;
  const int a = masked_argmax(online_next, next_mask);
  return reward + gamma * target_next(a);
}

double ddqn_target(double reward, const StateVector& next_state, bool terminal, double gamma, const Mlp& online,
                   const Mlp& target, std::span<const std::uint8_t> next_mask) {
  if (terminal) return reward;
  const Eigen::VectorXd x = to_input(next_state);
  return ddqn_target_from_values(reward, false, gamma, online.forward(x), target.forward(x), next_mask);
}

double n_step_return(std::span<const double> rewards, double gamma, double bootstrap) {
  double g = 0.0;
  double discount = 1.0;
  for (double r : rewards) {
    g += discount * r;
    discount *= gamma;
  }
  return g + discount * bootstrap;
}

Eigen::VectorXd to_input(const StateVector& s) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) x(static_cast<Eigen::Index>(i)) = s[i];
  return x;
}

// ---------------------------------------------------------------------------

LearningAgent::LearningAgent(int input_size, int action_count, AgentConfig cfg, int total_turns, MaskFn next_mask,
                             Rng& init_rng)
    : cfg_((cfg.validate(), std::move(cfg))),
      total_turns_(total_turns),
      action_count_(action_count),
      next_mask_(std::move(next_mask)),
      online_(
          [&] {
            std::vector<int> widths{input_size};
            widths.insert(widths.end(), cfg_.hidden.begin(), cfg_.hidden.end());
            widths.push_back(action_count);
            return widths;
          }(),
          init_rng),
      target_(online_),
      buffer_(cfg_.replay_capacity) {
  if (total_turns_ <= 0) throw ConfigError("agent: total turns must be positive");
  if (!next_mask_) throw ConfigError("agent: next-state mask function required");
}

void LearningAgent::begin_game(int total_turns) {
  if (total_turns <= 0) throw ConfigError("agent: total turns must be positive");
  total_turns_ = total_turns;
}

void LearningAgent::set_experience_filter(ExperienceFilter filter) {
  if (filter_) throw ConfigError("agent: an experience filter is already attached");
  filter_ = std::move(filter);
}

void LearningAgent::observe(const Experience& e, int turn) {
  if (filter_) {
    store(filter_(e, turn));
  } else {
    store(e);
  }
}

void LearningAgent::store(const Experience& e) { buffer_.push(e); }

LearningAgent::BatchView LearningAgent::prepare(std::span<const Experience* const> batch) const {
  if (batch.empty()) throw DomainError("update: empty batch");
  const auto width = static_cast<Eigen::Index>(batch.front()->state.size());
  const auto n = static_cast<Eigen::Index>(batch.size());
  BatchView v;
  v.states.resize(width, n);
  v.next_states.resize(width, n);
  v.actions.resize(batch.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Experience& e = *batch[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(e.state.size()) != width || static_cast<Eigen::Index>(e.next_state.size()) != width)
      throw DomainError("update: inconsistent state widths in batch");
    for (Eigen::Index r = 0; r < width; ++r) {
      v.states(r, i) = e.state[static_cast<std::size_t>(r)];
      v.next_states(r, i) = e.next_state[static_cast<std::size_t>(r)];
    }
    v.actions[static_cast<std::size_t>(i)] = e.action;
  }
  v.online_next = online_.forward_batch(v.next_states);
  v.target_next = target_.forward_batch(v.next_states);
  v.ddqn_targets.resize(batch.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Experience& e = *batch[static_cast<std::size_t>(i)];
    if (e.terminal) {
      v.ddqn_targets[static_cast<std::size_t>(i)] = e.reward;
      continue;
    }
    const ActionMask mask = next_mask_(e.next_state);
    v.ddqn_targets[static_cast<std::size_t>(i)] = ddqn_target_from_values(
        e.reward, false, cfg_.gamma, v.online_next.col(i), v.target_next.col(i), mask);
  }
  return v;
}

double LearningAgent::apply_update(const BatchView& view, std::span<const double> targets) {
  const double loss = online_.train_batch(view.states, view.actions, targets, cfg_.learning_rate);
  ++updates_;
  if (updates_ % cfg_.target_sync_period == 0) target_ = online_;
  return loss;
}

// ---------------------------------------------------------------------------

Decision DdqnAgent::act(const Observation& obs, Rng& rng) {
  const double eps = epsilon(obs.turn);
  const Eigen::VectorXd values = online_.forward(to_input(obs.state));
  return {select_action(values, obs.mask, eps, rng), ActionSource::kDqn, eps};
}

double DdqnAgent::update(std::span<const Experience* const> batch) {
  const BatchView view = prepare(batch);
  return apply_update(view, view.ddqn_targets);
}

std::optional<double> DdqnAgent::learn(int turn, Rng& rng) {
  (void)turn;
  if (buffer_.size() < cfg_.batch_size) return std::nullopt;
  const auto batch = buffer_.sample(cfg_.batch_size, rng);
  return update(batch);
}

// ---------------------------------------------------------------------------

N2dAgent::N2dAgent(int input_size, int action_count, AgentConfig cfg, int total_turns, MaskFn next_mask,
                   Rng& init_rng)
    : LearningAgent(input_size, action_count, std::move(cfg), total_turns, std::move(next_mask), init_rng),
      change_step_(ctf::change_step(total_turns)) {
  if (cfg_.hidden.empty()) throw ConfigError("N2D: needs a hidden layer for the dictionary embedding");
  dictionaries_.reserve(static_cast<std::size_t>(action_count));
  for (int a = 0; a < action_count; ++a) dictionaries_.emplace_back(cfg_.hidden.front(), cfg_.dnd);
}

void N2dAgent::begin_game(int total_turns) {
  LearningAgent::begin_game(total_turns);
  change_step_ = ctf::change_step(total_turns);
  pending_.clear();
  blend_credit_ = 0.0;
}

Eigen::VectorXd N2dAgent::nec_values(const StateVector& s, std::span<const std::uint8_t> mask) {
  if (mask.size() != dictionaries_.size()) throw DomainError("nec_values: mask width mismatch");
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mask.size()));
  const Eigen::VectorXd key = online_.embed(to_input(s));
  for (std::size_t a = 0; a < mask.size(); ++a)
    if (mask[a] && !dictionaries_[a].empty()) values(static_cast<Eigen::Index>(a)) = dictionaries_[a].lookup(key);
  return values;
}

Decision N2dAgent::act(const Observation& obs, Rng& rng) {
  const double eps = epsilon(obs.turn);
  bool use_dqn = obs.turn >= change_step_;
  if (!use_dqn) {
    const double q = dqn_selection_probability(obs.turn, change_step_);
    if (cfg_.random_blend) {
      use_dqn = rng.uniform() < q;
    } else {
      blend_credit_ += q;
      if (blend_credit_ >= 1.0) {
        blend_credit_ -= 1.0;
        use_dqn = true;
      }
    }
  }
  const Eigen::VectorXd values = use_dqn ? online_.forward(to_input(obs.state)) : nec_values(obs.state, obs.mask);
  return {select_action(values, obs.mask, eps, rng), use_dqn ? ActionSource::kDqn : ActionSource::kNec, eps};
}

void N2dAgent::nec_update(std::span<const Experience> window) {
  if (window.empty()) return;
  const Experience& last = window.back();
  double bootstrap = 0.0;
  if (!last.terminal) {
    const ActionMask mask = next_mask_(last.next_state);
    const Eigen::VectorXd key = online_.embed(to_input(last.next_state));
    bool any = false;
    for (std::size_t a = 0; a < mask.size() && a < dictionaries_.size(); ++a) {
      if (!mask[a] || dictionaries_[a].empty()) continue;
      const double v = dictionaries_[a].lookup(key);
      bootstrap = any ? std::max(bootstrap, v) : v;
      any = true;
    }
  }
  std::vector<double> rewards;
  rewards.reserve(window.size());
  for (const auto& e : window) rewards.push_back(e.reward);
  const double ret = n_step_return(rewards, cfg_.gamma, bootstrap);
  const Experience& first = window.front();
  dictionaries_.at(static_cast<std::size_t>(first.action)).write(online_.embed(to_input(first.state)), ret);
}

void N2dAgent::store(const Experience& e) {
  buffer_.push(e);
  pending_.push_back(e);
  auto flush_front = [this] {
    const std::vector<Experience> window(pending_.begin(), pending_.end());
    nec_update(window);
    pending_.pop_front();
  };
  if (pending_.size() >= static_cast<std::size_t>(cfg_.n_step)) flush_front();
  if (e.terminal)
    while (!pending_.empty()) flush_front();
}

double N2dAgent::update(std::span<const Experience* const> batch, int turn) {
  const BatchView view = prepare(batch);
  const double weight = nec_target_weight(turn, change_step_);
  if (weight <= 0.0) return apply_update(view, view.ddqn_targets);

  std::vector<double> targets = view.ddqn_targets;
  const Eigen::MatrixXd keys = online_.embed_batch(view.next_states);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Experience& e = *batch[i];
    const auto col = static_cast<Eigen::Index>(i);
    double nec_target = e.reward;
    if (!e.terminal) {
      const int greedy = masked_argmax(view.online_next.col(col), next_mask_(e.next_state));
      Dnd& dict = dictionaries_[static_cast<std::size_t>(greedy)];
      if (dict.empty()) continue;
      nec_target = e.reward + cfg_.gamma * dict.lookup(keys.col(col));
    }
    targets[i] = blend_target(weight, nec_target, view.ddqn_targets[i]);
  }
  return apply_update(view, targets);
}

std::optional<double> N2dAgent::learn(int turn, Rng& rng) {
  if (buffer_.size() < cfg_.batch_size) return std::nullopt;
  const auto batch = buffer_.sample(cfg_.batch_size, rng);
  return update(batch, turn);
}

}  // namespace ctf
