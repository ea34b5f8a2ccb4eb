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

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ctf/agents.hpp"
#include "ctf/env.hpp"
#include "ctf/mlp.hpp"

namespace ctf {

struct PoisonConfig {
  int limit = 2;             // max flips per category
  double q_threshold = 1.0;  // candidates with V below this are eligible
  bool enabled = false;

  void validate() const;  // ConfigError when limit < 0
  bool operator==(const PoisonConfig&) const = default;
};

// fp_nodes: clean nodes marked compromised. fn_nodes: compromised nodes
// marked clean. Each list is ordered by ascending score, ties by node id;
// the score vectors are parallel to the node lists.
struct PoisonOutcome {
  std::vector<int> fp_nodes;
  std::vector<int> fn_nodes;
  std::vector<double> fp_scores;
  std::vector<double> fn_scores;
  StateVector perturbed_next_state;
  double recomputed_reward = 0.0;
};

// Action values for a batch of states, one state per column.
using BatchQFunction = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

// Re-evaluates the reward of a (possibly tampered) transition.
using RewardFn = std::function<double(const Experience&)>;

// The defender's online network as a BatchQFunction. `m` must outlive it.
BatchQFunction q_function(const Mlp& m);

// V = max over legal a' of Q(s' with `node` flipped, a').
double candidate_value(const BatchQFunction& q, const StateVector& s_prime, int node,
                       std::span<const std::uint8_t> mask);

// candidate_value for nodes 0..node_count-1, evaluated as one batch.
std::vector<double> candidate_values(const BatchQFunction& q, const StateVector& s_prime, int node_count,
                                     std::span<const std::uint8_t> mask);

// State-manipulation attack on one stored experience. Every node position of
// s' is scored once by flipping it alone; a candidate joins its category when
// V < q_threshold or V is below the worst value already kept, and each
// category keeps at most `limit` of the lowest-V candidates. All kept flips
// are applied together and the reward is recomputed on the tampered
// transition. Throws ContractViolation when cfg.enabled is false.
std::pair<Experience, PoisonOutcome> poison_experience(const BatchQFunction& q, const Experience& e,
                                                       const PoisonConfig& cfg, int node_count,
                                                       std::span<const std::uint8_t> mask, const RewardFn& reward_fn);

struct PoisonAuditEntry {
  int turn = 0;
  std::vector<int> fp_nodes;
  std::vector<int> fn_nodes;
  std::vector<double> fp_scores;
  std::vector<double> fn_scores;
  int node_bits_changed = 0;
  int link_bits_changed = 0;
};

// Handle returned by attach_whitebox_tap. Shares the audit trail with the
// filter installed on the agent, so it may outlive either.
class WhiteboxTap {
 public:
  const PoisonConfig& config() const { return state_->cfg; }
  const std::vector<PoisonAuditEntry>& audit() const { return state_->audit; }

 private:
  friend WhiteboxTap attach_whitebox_tap(LearningAgent&, const PoisonConfig&, int, RewardFn);
  struct State {
    PoisonConfig cfg;
    std::vector<PoisonAuditEntry> audit;
  };
  std::shared_ptr<State> state_;
};

// Interposes poison_experience between the defender's observations and its
// replay buffer (and, for N2D, its dictionaries). Action selection is not
// affected. With cfg.enabled false the tap passes experiences through
// untouched. Throws ConfigError if the agent already has a tap.
WhiteboxTap attach_whitebox_tap(LearningAgent& defender, const PoisonConfig& cfg, int node_count, RewardFn reward_fn);

// "turn,fp_nodes,fn_nodes,v_scores" with ';'-joined lists; v_scores lists
// the fp scores followed by the fn scores.
void write_audit_csv(std::ostream& out, const std::vector<PoisonAuditEntry>& audit);

}  // namespace ctf
