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

#include "ctf/agents.hpp"

namespace ctf {

// Hop distance from every host to `target` over the up links of g; -1 when
// unreachable.
std::vector<int> hop_distances(const GameState& g, const Topology& t, HostId target);

class NoOpPlayer final : public Player {
 public:
  std::string_view name() const override { return "noop"; }
  Decision act(const Observation& obs, Rng& rng) override;
};

// Uniform over the legal actions, no-op included.
class RandomPlayer final : public Player {
 public:
  std::string_view name() const override { return "random"; }
  Decision act(const Observation& obs, Rng& rng) override;
};

// Compromises the frontier host closest to the critical server; ties are
// broken uniformly at random.
class GreedyAttacker final : public Player {
 public:
  std::string_view name() const override { return "greedy-attacker"; }
  Decision act(const Observation& obs, Rng& rng) override;
};

// Isolates the compromised, still-connected host closest to the critical
// server (lowest id on ties); no-op when there is none.
class IsolateOnSightDefender final : public Player {
 public:
  std::string_view name() const override { return "isolate-on-sight"; }
  Decision act(const Observation& obs, Rng& rng) override;
};

// Cuts the critical server off by isolating its wired neighbours one per
// turn, then idles.
class FortressDefender final : public Player {
 public:
  std::string_view name() const override { return "fortress"; }
  Decision act(const Observation& obs, Rng& rng) override;
};

}  // namespace ctf
