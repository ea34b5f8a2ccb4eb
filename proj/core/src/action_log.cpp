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

#include "ctf/action_log.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ctf/errors.hpp"

namespace ctf {

namespace {

constexpr const char* kVersionPrefix = "# ctf-arena action-log v1";
constexpr const char* kColumns = "turn,role,action-kind,host";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& text, std::size_t lineno, const char* what) {
  std::istringstream in(text);
  T value{};
  if (!(in >> value) || !in.eof()) throw ParseError("action-log", lineno, std::string("bad ") + what + " '" + text + "'");
  return value;
}

}  // namespace

void write_action_log_header(std::ostream& out, const ActionLogHeader& h) {
  out << kVersionPrefix << " run=" << h.run_index << " seed=" << h.seed << " turn_limit=" << h.turn_limit
      << '\n'
      << kColumns << '\n';
}

void write_action_log_row(std::ostream& out, int turn, const Action& a) {
  out << turn << ',' << to_string(a.role) << ',' << to_string(a.kind) << ','
      << (a.kind == ActionKind::kNoOp ? -1 : a.host) << '\n';
}

void write_action_log(std::ostream& out, const ActionLog& log) {
  write_action_log_header(out, log.header);
  for (const auto& e : log.entries) write_action_log_row(out, e.turn, e.action);
}

ActionLog read_action_log(std::istream& in) {
  ActionLog log;
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw ParseError("action-log", 1, "empty file");
  ++lineno;
  if (line.rfind(kVersionPrefix, 0) != 0) throw ParseError("action-log", lineno, "missing version line");
  {
    std::istringstream meta(line.substr(std::string(kVersionPrefix).size()));
    std::string kv;
    bool run = false, seed = false, limit = false;
    while (meta >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParseError("action-log", lineno, "bad header field '" + kv + "'");
      const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
      if (key == "run") {
        log.header.run_index = parse_number<int>(value, lineno, "run");
        run = true;
      } else if (key == "seed") {
        log.header.seed = parse_number<std::uint64_t>(value, lineno, "seed");
        seed = true;
      } else if (key == "turn_limit") {
        log.header.turn_limit = parse_number<int>(value, lineno, "turn_limit");
        limit = true;
      } else {
        throw ParseError("action-log", lineno, "unknown header field '" + key + "'");
      }
    }
    if (!(run && seed && limit)) throw ParseError("action-log", lineno, "header needs run, seed and turn_limit");
  }

  if (!std::getline(in, line) || line != kColumns)
    throw ParseError("action-log", lineno + 1, std::string("expected column header '") + kColumns + "'");
  ++lineno;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 4) throw ParseError("action-log", lineno, "expected 4 fields");
    ActionLogEntry e;
    e.turn = parse_number<int>(f[0], lineno, "turn");
    try {
      e.action.role = role_from_string(f[1]);
      e.action.kind = action_kind_from_string(f[2]);
    } catch (const DomainError& err) {
      throw ParseError("action-log", lineno, err.what());
    }
    e.action.host = parse_number<int>(f[3], lineno, "host");
    log.entries.push_back(e);
  }
  return log;
}

GameState replay(const ActionLog& log, const Topology& t, const RewardConfig& cfg) {
  GameState g = reset(t, log.header.run_index);
  const auto& rows = log.entries;
  if (rows.size() % 2 != 0) throw DomainError("replay: log has an unpaired row");
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    const auto& att = rows[i];
    const auto& def = rows[i + 1];
    if (att.action.role != Role::kAttacker || def.action.role != Role::kDefender || att.turn != def.turn ||
        att.turn != g.turn)
      throw DomainError("replay: rows out of order at turn " + std::to_string(att.turn));
    g = step(g, att.action, def.action, cfg, t, log.header.turn_limit).next;
  }
  return g;
}

}  // namespace ctf
