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

#include "ctf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <thread>

#include "ctf/action_log.hpp"
#include "ctf/errors.hpp"
#include "ctf/rng.hpp"
#include "ctf/topology.hpp"

namespace ctf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw ConfigError("config: bad value for " + key + ": '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("config: bad flag for " + key + ": '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const std::string item = trim(value.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    out.push_back(parse_number<int>(key, item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// One run's players plus everything they borrow.
struct Arena {
  std::shared_ptr<const Topology> topology;
  std::unique_ptr<LearningAgent> attacker;
  std::unique_ptr<LearningAgent> defender;
  std::optional<WhiteboxTap> tap;
};

std::unique_ptr<LearningAgent> make_agent(Algorithm alg, Role role, const ExperimentConfig& cfg, int turn_limit,
                                          const std::shared_ptr<const Topology>& topo, Rng& rng) {
  const int inputs = topo->host_count() + topo->link_count();
  const int actions = action_space_size(role, topo->host_count());
  MaskFn mask = [topo, role](const StateVector& s) { return legal_mask(s, role, *topo); };
  if (alg == Algorithm::kDdqn)
    return std::make_unique<DdqnAgent>(inputs, actions, cfg.agent, turn_limit, std::move(mask), rng);
  return std::make_unique<N2dAgent>(inputs, actions, cfg.agent, turn_limit, std::move(mask), rng);
}

Arena build_arena(const ExperimentConfig& cfg, int turn_limit, std::uint64_t seed) {
  Arena a;
  a.topology = std::make_shared<const Topology>(Topology::build_default());
  Rng init(derive_seed({seed, 1}));
  a.attacker = make_agent(algorithm_for(cfg.game, Role::kAttacker), Role::kAttacker, cfg, turn_limit, a.topology, init);
  a.defender = make_agent(algorithm_for(cfg.game, Role::kDefender), Role::kDefender, cfg, turn_limit, a.topology, init);
  if (cfg.attack_enabled) {
    PoisonConfig pc = cfg.poison;
    pc.enabled = true;
    auto topo = a.topology;
    const RewardConfig reward = cfg.reward;
    a.tap = attach_whitebox_tap(*a.defender, pc, topo->host_count(), [topo, reward](const Experience& e) {
      return transition_reward(Role::kDefender, e.state, e.action, e.next_state, reward, *topo);
    });
  }
  return a;
}

void write_diagnostic(std::ostream& out, int turn, Role role, double loss, const Decision& d) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g,%.6g", loss, d.epsilon);
  out << turn << ',' << to_string(role) << ',' << buf << ',' << to_string(d.source) << '\n';
}

RunRecord play_run(Arena& arena, const ExperimentConfig& cfg, int set, int run, std::uint64_t seed,
                   const RunInstruments& inst) {
  RunRecord rec;
  rec.set = set;
  rec.run = run;
  rec.seed = seed;
  const int limit = cfg.turn_limit(set);
  const std::size_t audit_start = arena.tap ? arena.tap->audit().size() : 0;

  if (inst.action_log) write_action_log_header(*inst.action_log, {run - 1, seed, limit});
  if (inst.diagnostics) *inst.diagnostics << "turn,role,loss,epsilon,action-source\n";

  GameHooks hooks;
  hooks.on_turn = [&](const TurnRecord& tr, const GameState& next) {
    if (inst.action_log) {
      const int n = arena.topology->host_count();
      write_action_log_row(*inst.action_log, tr.turn, action_from_index(Role::kAttacker, tr.attacker.action, n));
      write_action_log_row(*inst.action_log, tr.turn, action_from_index(Role::kDefender, tr.defender.action, n));
    }
    if (inst.diagnostics) {
      if (tr.attacker_loss) write_diagnostic(*inst.diagnostics, tr.turn, Role::kAttacker, *tr.attacker_loss, tr.attacker);
      if (tr.defender_loss) write_diagnostic(*inst.diagnostics, tr.turn, Role::kDefender, *tr.defender_loss, tr.defender);
    }
    if (inst.on_turn) inst.on_turn(tr, next);
  };

  try {
    Rng rng(derive_seed({seed, 2}));
    const GameResult result =
        play_game(*arena.topology, *arena.attacker, *arena.defender, cfg.reward, limit, run - 1, rng, hooks);
    rec.winner = algorithm_for(cfg.game, result.winner == Winner::kAttacker ? Role::kAttacker : Role::kDefender);
    rec.win_turn = result.win_turn;
  } catch (const std::exception& ex) {
    rec.winner.reset();
    rec.win_turn = 0;
    rec.error = ex.what();
  }

  if (inst.audit && arena.tap) {
    const auto& audit = arena.tap->audit();
    write_audit_csv(*inst.audit, {audit.begin() + static_cast<std::ptrdiff_t>(audit_start), audit.end()});
  }
  if (inst.on_finish) inst.on_finish(*arena.attacker, *arena.defender, arena.tap ? &*arena.tap : nullptr);
  return rec;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (game != 1 && game != 2) throw ConfigError("config: game must be 1 or 2");
  if (turn_limits.empty()) throw ConfigError("config: turn_limits is empty");
  for (int l : turn_limits)
    if (l <= 0) throw ConfigError("config: turn limits must be positive");
  if (runs_per_set < 1) throw ConfigError("config: runs_per_set must be >= 1");
  if (threads < 1) throw ConfigError("config: threads must be >= 1");
  poison.validate();
  reward.validate();
  agent.validate();
}

int ExperimentConfig::turn_limit(int set) const {
  if (set < 1 || static_cast<std::size_t>(set) > turn_limits.size())
    throw DomainError("config: set index " + std::to_string(set) + " out of range");
  return turn_limits[static_cast<std::size_t>(set - 1)];
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto num = [&](auto& field) { field = parse_number<std::remove_reference_t<decltype(field)>>(key, value); };
  if (key == "game") num(cfg.game);
  else if (key == "attack") cfg.attack_enabled = parse_bool(key, value);
  else if (key == "turn_limits") cfg.turn_limits = parse_int_list(key, value);
  else if (key == "runs_per_set") num(cfg.runs_per_set);
  else if (key == "seed") num(cfg.base_seed);
  else if (key == "carry_weights") cfg.carry_weights = parse_bool(key, value);
  else if (key == "threads") num(cfg.threads);
  else if (key == "poison.limit") num(cfg.poison.limit);
  else if (key == "poison.q_threshold") num(cfg.poison.q_threshold);
  else if (key == "reward.flag_capture") num(cfg.reward.flag_capture_reward);
  else if (key == "reward.attacker_eliminated") num(cfg.reward.attacker_eliminated_reward);
  else if (key == "reward.step_cost") num(cfg.reward.per_step_cost);
  else if (key == "reward.invalid_action") num(cfg.reward.invalid_action_penalty);
  else if (key == "reward.collateral") num(cfg.reward.collateral_isolation_penalty);
  else if (key == "agent.hidden") cfg.agent.hidden = parse_int_list(key, value);
  else if (key == "agent.gamma") num(cfg.agent.gamma);
  else if (key == "agent.learning_rate") num(cfg.agent.learning_rate);
  else if (key == "agent.epsilon_start") num(cfg.agent.epsilon_start);
  else if (key == "agent.epsilon_end") num(cfg.agent.epsilon_end);
  else if (key == "agent.epsilon_decay_fraction") num(cfg.agent.epsilon_decay_fraction);
  else if (key == "agent.replay_capacity") num(cfg.agent.replay_capacity);
  else if (key == "agent.batch_size") num(cfg.agent.batch_size);
  else if (key == "agent.target_sync_period") num(cfg.agent.target_sync_period);
  else if (key == "agent.n_step") num(cfg.agent.n_step);
  else if (key == "agent.random_blend") cfg.agent.random_blend = parse_bool(key, value);
  else if (key == "dnd.capacity") num(cfg.agent.dnd.capacity);
  else if (key == "dnd.neighbors") num(cfg.agent.dnd.neighbors);
  else if (key == "dnd.smoothing") num(cfg.agent.dnd.smoothing);
  else if (key == "dnd.write_rate") num(cfg.agent.dnd.write_rate);
  else throw ConfigError("config: unknown key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    try {
      apply_setting(base, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    } catch (const ConfigError& ex) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  base.validate();
  return base;
}

Algorithm algorithm_for(int game, Role role) {
  if (game != 1 && game != 2) throw DomainError("algorithm_for: game must be 1 or 2");
  const bool ddqn_attacks = game == 1;
  return (role == Role::kAttacker) == ddqn_attacks ? Algorithm::kDdqn : Algorithm::kN2d;
}

std::uint64_t run_seed(const ExperimentConfig& cfg, int set, int run) {
  return derive_seed({cfg.base_seed, static_cast<std::uint64_t>(cfg.game), cfg.attack_enabled ? 1u : 0u,
                      static_cast<std::uint64_t>(set), static_cast<std::uint64_t>(run)});
}

RunRecord run_game(const ExperimentConfig& cfg, int set, int run, const RunInstruments& instruments) {
  cfg.validate();
  const int limit = cfg.turn_limit(set);
  if (run < 1) throw DomainError("run_game: run index is 1-based");
  const std::uint64_t seed = run_seed(cfg, set, run);
  std::optional<Arena> arena;
  try {
    arena.emplace(build_arena(cfg, limit, seed));
  } catch (const std::exception& ex) {
    RunRecord rec{set, run, std::nullopt, 0, seed, ex.what()};
    return rec;
  }
  return play_run(*arena, cfg, set, run, seed, instruments);
}

std::vector<RunRecord> run_set(const ExperimentConfig& cfg, int set, const InstrumentFactory& instruments) {
  cfg.validate();
  const int limit = cfg.turn_limit(set);
  std::vector<RunRecord> records(static_cast<std::size_t>(cfg.runs_per_set));
  auto inst_for = [&](int run) { return instruments ? instruments(run) : RunInstruments{}; };

  if (cfg.carry_weights) {
    Arena arena = build_arena(cfg, limit, run_seed(cfg, set, 1));
    for (int run = 1; run <= cfg.runs_per_set; ++run)
      records[static_cast<std::size_t>(run - 1)] = play_run(arena, cfg, set, run, run_seed(cfg, set, run), inst_for(run));
    return records;
  }

  std::atomic<int> next{1};
  auto worker = [&] {
    for (int run = next++; run <= cfg.runs_per_set; run = next++)
      records[static_cast<std::size_t>(run - 1)] = run_game(cfg, set, run, inst_for(run));
  };
  const int workers = std::min(cfg.threads, cfg.runs_per_set);
  if (workers <= 1) {
    worker();
    return records;
  }
  std::vector<std::jthread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  pool.clear();
  return records;
}

}  // namespace ctf
