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

#include "ctf/poison.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "ctf/errors.hpp"

namespace ctf {

namespace {

struct Candidate {
  double value;
  int node;
};

bool before(const Candidate& a, const Candidate& b) {
  return a.value < b.value || (a.value == b.value && a.node < b.node);
}

double best_legal(const Eigen::MatrixXd& values, Eigen::Index col, std::span<const std::uint8_t> mask) {
  if (static_cast<std::size_t>(values.rows()) != mask.size())
    throw DomainError("candidate_value: Q width does not match the mask");
  bool any = false;
  double best = 0.0;
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (!mask[a]) continue;
    const double v = values(static_cast<Eigen::Index>(a), col);
    if (!any || v > best) best = v;
    any = true;
  }
  if (!any) throw ContractViolation("candidate_value: no legal action");
  return best;
}

// Keeps the category list sorted by (value, node) and at most `limit` long.
void consider(std::vector<Candidate>& kept, const Candidate& c, int limit, double threshold) {
  const bool below_threshold = c.value < threshold;
  const bool beats_worst = !kept.empty() && c.value < kept.back().value;
  if (!below_threshold && !beats_worst) return;
  kept.insert(std::upper_bound(kept.begin(), kept.end(), c, before), c);
  if (static_cast<int>(kept.size()) > limit) kept.pop_back();
}

std::string join(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

void PoisonConfig::validate() const {
  if (limit < 0) throw ConfigError("poison: limit must be >= 0");
}

BatchQFunction q_function(const Mlp& m) {
  return [&m](const Eigen::MatrixXd& states) { return m.forward_batch(states); };
}

std::vector<double> candidate_values(const BatchQFunction& q, const StateVector& s_prime, int node_count,
                                     std::span<const std::uint8_t> mask) {
  if (node_count < 0 || static_cast<std::size_t>(node_count) > s_prime.size())
    throw DomainError("candidate_values: node count exceeds state width");
  const auto width = static_cast<Eigen::Index>(s_prime.size());
  Eigen::MatrixXd batch(width, node_count);
  for (Eigen::Index c = 0; c < node_count; ++c) {
    for (Eigen::Index r = 0; r < width; ++r) batch(r, c) = s_prime[static_cast<std::size_t>(r)];
    batch(c, c) = s_prime[static_cast<std::size_t>(c)] ? 0.0 : 1.0;
  }
  const Eigen::MatrixXd values = q(batch);
  std::vector<double> out(static_cast<std::size_t>(node_count));
  for (Eigen::Index c = 0; c < node_count; ++c) out[static_cast<std::size_t>(c)] = best_legal(values, c, mask);
  return out;
}

double candidate_value(const BatchQFunction& q, const StateVector& s_prime, int node,
                       std::span<const std::uint8_t> mask) {
  if (node < 0 || static_cast<std::size_t>(node) >= s_prime.size())
    throw DomainError("candidate_value: node out of range");
  Eigen::MatrixXd x(static_cast<Eigen::Index>(s_prime.size()), 1);
  for (std::size_t r = 0; r < s_prime.size(); ++r) x(static_cast<Eigen::Index>(r), 0) = s_prime[r];
  x(node, 0) = s_prime[static_cast<std::size_t>(node)] ? 0.0 : 1.0;
  return best_legal(q(x), 0, mask);
}

std::pair<Experience, PoisonOutcome> poison_experience(const BatchQFunction& q, const Experience& e,
                                                       const PoisonConfig& cfg, int node_count,
                                                       std::span<const std::uint8_t> mask, const RewardFn& reward_fn) {
  if (!cfg.enabled) throw ContractViolation("poison_experience: attack is disabled");
  cfg.validate();
  PoisonOutcome out;
  out.perturbed_next_state = e.next_state;
  out.recomputed_reward = e.reward;
  if (cfg.limit == 0) return {e, std::move(out)};

  const std::vector<double> scores = candidate_values(q, e.next_state, node_count, mask);
  std::vector<Candidate> fp, fn;
  for (int node = 0; node < node_count; ++node) {
    const Candidate c{scores[static_cast<std::size_t>(node)], node};
    if (e.next_state[static_cast<std::size_t>(node)]) {
      consider(fn, c, cfg.limit, cfg.q_threshold);
    } else {
      consider(fp, c, cfg.limit, cfg.q_threshold);
    }
  }

  for (const auto& c : fp) {
    out.fp_nodes.push_back(c.node);
    out.fp_scores.push_back(c.value);
    out.perturbed_next_state[static_cast<std::size_t>(c.node)] = 1;
  }
  for (const auto& c : fn) {
    out.fn_nodes.push_back(c.node);
    out.fn_scores.push_back(c.value);
    out.perturbed_next_state[static_cast<std::size_t>(c.node)] = 0;
  }

  Experience tampered = e;
  tampered.next_state = out.perturbed_next_state;
  tampered.reward = reward_fn ? reward_fn(tampered) : e.reward;
  out.recomputed_reward = tampered.reward;
  return {std::move(tampered), std::move(out)};
}

WhiteboxTap attach_whitebox_tap(LearningAgent& defender, const PoisonConfig& cfg, int node_count, RewardFn reward_fn) {
  cfg.validate();
  if (defender.has_experience_filter()) throw ConfigError("attach_whitebox_tap: defender already tapped");
  WhiteboxTap tap;
  tap.state_ = std::make_shared<WhiteboxTap::State>();
  tap.state_->cfg = cfg;

  auto state = tap.state_;
  const Mlp& model = defender.online();
  const LearningAgent& agent = defender;
  defender.set_experience_filter([state, &model, &agent, node_count, reward_fn = std::move(reward_fn)](
                                     const Experience& e, int turn) -> Experience {
    if (!state->cfg.enabled) return e;
    const ActionMask mask = agent.next_mask(e.next_state);
    auto [tampered, outcome] = poison_experience(q_function(model), e, state->cfg, node_count, mask, reward_fn);

    PoisonAuditEntry entry;
    entry.turn = turn;
    for (std::size_t i = 0; i < e.next_state.size(); ++i) {
      if (e.next_state[i] == tampered.next_state[i]) continue;
      if (static_cast<int>(i) < node_count) {
        ++entry.node_bits_changed;
      } else {
        ++entry.link_bits_changed;
      }
    }
    entry.fp_nodes = std::move(outcome.fp_nodes);
    entry.fn_nodes = std::move(outcome.fn_nodes);
    entry.fp_scores = std::move(outcome.fp_scores);
    entry.fn_scores = std::move(outcome.fn_scores);
    state->audit.push_back(std::move(entry));
    return tampered;
  });
  return tap;
}

void write_audit_csv(std::ostream& out, const std::vector<PoisonAuditEntry>& audit) {
  out << "# ctf-arena poison-audit v1\n";
  out << "turn,fp_nodes,fn_nodes,v_scores\n";
  char buf[32];
  for (const auto& a : audit) {
    out << a.turn << ',' << join(a.fp_nodes) << ',' << join(a.fn_nodes) << ',';
    bool first = true;
    for (const auto* scores : {&a.fp_scores, &a.fn_scores}) {
      for (double v : *scores) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << (first ? "" : ";") << buf;
        first = false;
      }
    }
    out << '\n';
  }
}

}  // namespace ctf
