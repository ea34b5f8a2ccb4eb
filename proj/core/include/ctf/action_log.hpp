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

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ctf/env.hpp"

namespace ctf {

// Per-game action log, CSV with a version line:
//
//   # ctf-arena action-log v1 run=<index> seed=<seed> turn_limit=<limit>
//   turn,role,action-kind,host
//   0,attacker,compromise,0
//   0,defender,noop,-1
//
// Each played turn contributes one attacker row followed by one defender row.
struct ActionLogHeader {
  int run_index = 0;
  std::uint64_t seed = 0;
  int turn_limit = 0;

  bool operator==(const ActionLogHeader&) const = default;
};

struct ActionLogEntry {
  int turn = 0;
  Action action;

  bool operator==(const ActionLogEntry&) const = default;
};

struct ActionLog {
  ActionLogHeader header;
  std::vector<ActionLogEntry> entries;

  bool operator==(const ActionLog&) const = default;
};

void write_action_log_header(std::ostream& out, const ActionLogHeader& header);
void write_action_log_row(std::ostream& out, int turn, const Action& a);
void write_action_log(std::ostream& out, const ActionLog& log);

// Throws ParseError naming the offending line.
ActionLog read_action_log(std::istream& in);

// Re-plays the logged turns from reset(). The returned state is bit-identical
// to the one the original game ended in.
GameState replay(const ActionLog& log, const Topology& t, const RewardConfig& cfg);

}  // namespace ctf
