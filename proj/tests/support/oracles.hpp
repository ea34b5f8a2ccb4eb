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

// Reference implementations used as test oracles. Each is written directly
// from the definition, sharing no code with the library under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ctf/mlp.hpp"
#include "ctf/rng.hpp"

namespace ctf::oracle {

// Kernel-weighted average over the p nearest keys (ties by insertion order).
inline double knn_kernel_average(const std::vector<Eigen::VectorXd>& keys, const std::vector<double>& values,
                                 const Eigen::VectorXd& query, int p, double smoothing) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < query.size(); ++j) s += (keys[i](j) - query(j)) * (keys[i](j) - query(j));
    d.emplace_back(s, i);
  }
  std::sort(d.begin(), d.end());
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(p), d.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = 1.0 / (d[i].first + smoothing);
    num += w * values[d[i].second];
    den += w;
  }
  return num / den;
}

// Affine action values Q(s) = W s + b.
struct LinearQ {
  Eigen::MatrixXd w;
  Eigen::VectorXd b;

  Eigen::MatrixXd operator()(const Eigen::MatrixXd& states) const {
    Eigen::MatrixXd out = w * states;
    out.colwise() += b;
    return out;
  }
};

struct FlipSets {
  std::vector<int> fp;
  std::vector<int> fn;
};

// Scores every single-node flip, sorts each category ascending by (V, id)
// and keeps up to `limit` candidates with V < threshold.
inline FlipSets exhaustive_flip_oracle(const LinearQ& q, const std::vector<std::uint8_t>& s_prime, int node_count,
                                       const std::vector<std::uint8_t>& mask, int limit, double threshold) {
  std::vector<std::pair<double, int>> fp, fn;
  for (int node = 0; node < node_count; ++node) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(s_prime.size()));
    for (std::size_t i = 0; i < s_prime.size(); ++i) x(static_cast<Eigen::Index>(i)) = s_prime[i];
    x(node) = 1.0 - x(node);
    const Eigen::VectorXd v = q.w * x + q.b;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < mask.size(); ++a)
      if (mask[a]) best = std::max(best, v(static_cast<Eigen::Index>(a)));
    (s_prime[static_cast<std::size_t>(node)] ? fn : fp).emplace_back(best, node);
  }
  auto pick = [&](std::vector<std::pair<double, int>>& c) {
    std::sort(c.begin(), c.end());
    std::vector<int> out;
    for (const auto& [v, node] : c)
      if (v < threshold && static_cast<int>(out.size()) < limit) out.push_back(node);
    return out;
  };
  return {pick(fp), pick(fn)};
}

// Mean squared error of selected outputs, computed with a plain forward pass.
inline double mse(const Mlp& m, const Eigen::MatrixXd& x, const std::vector<int>& actions,
                  const std::vector<double>& targets) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    Eigen::VectorXd a = x.col(i);
    for (std::size_t l = 0; l < m.layer_count(); ++l) {
      Eigen::VectorXd z = m.weights(l) * a + m.biases(l);
      a = l + 1 < m.layer_count() ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
    }
    const double d = a(actions[static_cast<std::size_t>(i)]) - targets[static_cast<std::size_t>(i)];
    sum += d * d;
  }
  return sum / static_cast<double>(x.cols());
}

// Smallest |pre-activation| over all hidden units and samples.
inline double min_hidden_margin(const Mlp& m, const Eigen::MatrixXd& x) {
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    Eigen::VectorXd a = x.col(i);
    for (std::size_t l = 0; l + 1 < m.layer_count(); ++l) {
      const Eigen::VectorXd z = m.weights(l) * a + m.biases(l);
      margin = std::min(margin, z.cwiseAbs().minCoeff());
      a = z.cwiseMax(0.0);
    }
  }
  return margin;
}

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t parameters = 0;
};

// Central differences on every weight and bias. Relative error is
// |analytic - numeric| / max(|analytic|, |numeric|, floor).
inline GradCheckResult gradient_check(Mlp m, const Eigen::MatrixXd& x, const std::vector<int>& actions,
                                      const std::vector<double>& targets, double h = 1e-6, double floor = 1e-6) {
  const Mlp::Gradients g = m.gradients(x, actions, targets);
  GradCheckResult out;
  auto probe = [&](double& param, double analytic) {
    const double keep = param;
    param = keep + h;
    const double up = mse(m, x, actions, targets);
    param = keep - h;
    const double down = mse(m, x, actions, targets);
    param = keep;
    const double numeric = (up - down) / (2.0 * h);
    const double scale = std::max({std::fabs(analytic), std::fabs(numeric), floor});
    out.max_rel_error = std::max(out.max_rel_error, std::fabs(analytic - numeric) / scale);
    ++out.parameters;
  };
  for (std::size_t l = 0; l < m.layer_count(); ++l) {
    for (Eigen::Index r = 0; r < m.weights(l).rows(); ++r)
      for (Eigen::Index c = 0; c < m.weights(l).cols(); ++c) probe(m.weights(l)(r, c), g.weights[l](r, c));
    for (Eigen::Index r = 0; r < m.biases(l).size(); ++r) probe(m.biases(l)(r), g.biases[l](r));
  }
  return out;
}

// Deterministic 2-state, 2-action MDP. P[s][a] is the next state, R[s][a]
// the reward.
struct ToyMdp {
  int next[2][2] = {{0, 1}, {0, 1}};
  double reward[2][2] = {{0.0, 0.0}, {1.0, 0.3}};
  double gamma = 0.9;
};

// Greedy action per state after value iteration to convergence.
inline std::vector<int> value_iteration_policy(const ToyMdp& mdp) {
  double v[2] = {0.0, 0.0};
  for (int it = 0; it < 10000; ++it) {
    double nv[2];
    for (int s = 0; s < 2; ++s)
      nv[s] = std::max(mdp.reward[s][0] + mdp.gamma * v[mdp.next[s][0]], mdp.reward[s][1] + mdp.gamma * v[mdp.next[s][1]]);
    v[0] = nv[0];
    v[1] = nv[1];
  }
  std::vector<int> policy(2);
  for (int s = 0; s < 2; ++s) {
    const double q0 = mdp.reward[s][0] + mdp.gamma * v[mdp.next[s][0]];
    const double q1 = mdp.reward[s][1] + mdp.gamma * v[mdp.next[s][1]];
    policy[static_cast<std::size_t>(s)] = q1 > q0 ? 1 : 0;
  }
  return policy;
}

}  // namespace ctf::oracle
