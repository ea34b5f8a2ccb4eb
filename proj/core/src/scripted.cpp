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

#include "ctf/scripted.hpp"

#include <limits>
#include <queue>

#include "ctf/errors.hpp"

namespace ctf {

namespace {

void require_game(const Observation& obs) {
  if (!obs.game || !obs.topology) throw ContractViolation("scripted player needs the game state");
}

bool connected(const GameState& g, const Topology& t, HostId h) {
  for (LinkId id : t.incident_links(h))
    if (g.link_up[static_cast<std::size_t>(id)]) return true;
  return false;
}

}  // namespace

std::vector<int> hop_distances(const GameState& g, const Topology& t, HostId target) {
  std::vector<int> dist(static_cast<std::size_t>(t.host_count()), -1);
  std::queue<HostId> q;
  dist[static_cast<std::size_t>(target)] = 0;
  q.push(target);
  while (!q.empty()) {
    const HostId h = q.front();
    q.pop();
    for (LinkId id : t.incident_links(h)) {
      if (!g.link_up[static_cast<std::size_t>(id)]) continue;
      const Link& l = t.link(id);
      const HostId o = l.a == h ? l.b : l.a;
      if (dist[static_cast<std::size_t>(o)] < 0) {
        dist[static_cast<std::size_t>(o)] = dist[static_cast<std::size_t>(h)] + 1;
        q.push(o);
      }
    }
  }
  return dist;
}

Decision NoOpPlayer::act(const Observation&, Rng&) { return {0, ActionSource::kScripted, 0.0}; }

Decision RandomPlayer::act(const Observation& obs, Rng& rng) {
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(obs.mask.size()));
  return {select_action(zeros, obs.mask, 1.0, rng), ActionSource::kScripted, 1.0};
}

Decision GreedyAttacker::act(const Observation& obs, Rng& rng) {
  require_game(obs);
  const auto dist = hop_distances(*obs.game, *obs.topology, obs.topology->critical_server());
  std::vector<HostId> best;
  int best_d = std::numeric_limits<int>::max();
  for (HostId h : attack_frontier(*obs.game, *obs.topology)) {
    const int d = dist[static_cast<std::size_t>(h)];
    if (d < 0) continue;
    if (d < best_d) {
      best_d = d;
      best.clear();
    }
    if (d == best_d) best.push_back(h);
  }
  if (best.empty()) return {0, ActionSource::kScripted, 0.0};
  const HostId pick = best[static_cast<std::size_t>(rng.below(best.size()))];
  return {action_index({Role::kAttacker, ActionKind::kCompromise, pick}, obs.topology->host_count()),
          ActionSource::kScripted, 0.0};
}

Decision IsolateOnSightDefender::act(const Observation& obs, Rng&) {
  require_game(obs);
  const GameState& g = *obs.game;
  const Topology& t = *obs.topology;
  const auto dist = hop_distances(g, t, t.critical_server());
  HostId pick = -1;
  int pick_d = std::numeric_limits<int>::max();
  for (HostId h = 0; h < t.host_count(); ++h) {
    if (h == t.critical_server() || !g.node_compromised[static_cast<std::size_t>(h)] || !connected(g, t, h)) continue;
    const int raw = dist[static_cast<std::size_t>(h)];
    const int d = raw < 0 ? std::numeric_limits<int>::max() - 1 : raw;
    if (d < pick_d) {
      pick_d = d;
      pick = h;
    }
  }
  if (pick < 0) return {0, ActionSource::kScripted, 0.0};
  return {action_index({Role::kDefender, ActionKind::kIsolate, pick}, t.host_count()), ActionSource::kScripted, 0.0};
}

Decision FortressDefender::act(const Observation& obs, Rng&) {
  require_game(obs);
  const GameState& g = *obs.game;
  const Topology& t = *obs.topology;
  for (LinkId id : t.incident_links(t.critical_server())) {
    const Link& l = t.link(id);
    const HostId other = l.a == t.critical_server() ? l.b : l.a;
    if (connected(g, t, other))
      return {action_index({Role::kDefender, ActionKind::kIsolate, other}, t.host_count()), ActionSource::kScripted,
              0.0};
  }
  return {0, ActionSource::kScripted, 0.0};
}

}  // namespace ctf
