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

#include "ctf/results_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ctf/errors.hpp"

namespace ctf {

namespace {

using nlohmann::json;

constexpr const char* kCsvVersion = "# ctf-arena results v1";
constexpr const char* kCsvHeader = "set,run,winner,turn,seed";
constexpr int kJsonVersion = 1;

template <typename T>
T field(const std::string& text, const std::string& source, std::size_t line, const char* what) {
  T out{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError(source, line, std::string("bad ") + what + " '" + text + "'");
  return out;
}

json to_json(const ExperimentConfig& c) {
  const AgentConfig& a = c.agent;
  return {
      {"game", c.game},
      {"attack", c.attack_enabled},
      {"turn_limits", c.turn_limits},
      {"runs_per_set", c.runs_per_set},
      {"seed", c.base_seed},
      {"carry_weights", c.carry_weights},
      {"threads", c.threads},
      {"poison", {{"limit", c.poison.limit}, {"q_threshold", c.poison.q_threshold}, {"enabled", c.poison.enabled}}},
      {"reward",
       {{"flag_capture", c.reward.flag_capture_reward},
        {"attacker_eliminated", c.reward.attacker_eliminated_reward},
        {"step_cost", c.reward.per_step_cost},
        {"invalid_action", c.reward.invalid_action_penalty},
        {"collateral", c.reward.collateral_isolation_penalty}}},
      {"agent",
       {{"hidden", a.hidden},
        {"gamma", a.gamma},
        {"learning_rate", a.learning_rate},
        {"epsilon_start", a.epsilon_start},
        {"epsilon_end", a.epsilon_end},
        {"epsilon_decay_fraction", a.epsilon_decay_fraction},
        {"replay_capacity", a.replay_capacity},
        {"batch_size", a.batch_size},
        {"target_sync_period", a.target_sync_period},
        {"n_step", a.n_step},
        {"random_blend", a.random_blend}}},
      {"dnd",
       {{"capacity", a.dnd.capacity},
        {"neighbors", a.dnd.neighbors},
        {"smoothing", a.dnd.smoothing},
        {"write_rate", a.dnd.write_rate}}},
  };
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  j.at("game").get_to(c.game);
  j.at("attack").get_to(c.attack_enabled);
  j.at("turn_limits").get_to(c.turn_limits);
  j.at("runs_per_set").get_to(c.runs_per_set);
  j.at("seed").get_to(c.base_seed);
  j.at("carry_weights").get_to(c.carry_weights);
  j.at("threads").get_to(c.threads);
  const json& p = j.at("poison");
  p.at("limit").get_to(c.poison.limit);
  p.at("q_threshold").get_to(c.poison.q_threshold);
  p.at("enabled").get_to(c.poison.enabled);
  const json& r = j.at("reward");
  r.at("flag_capture").get_to(c.reward.flag_capture_reward);
  r.at("attacker_eliminated").get_to(c.reward.attacker_eliminated_reward);
  r.at("step_cost").get_to(c.reward.per_step_cost);
  r.at("invalid_action").get_to(c.reward.invalid_action_penalty);
  r.at("collateral").get_to(c.reward.collateral_isolation_penalty);
  const json& a = j.at("agent");
  a.at("hidden").get_to(c.agent.hidden);
  a.at("gamma").get_to(c.agent.gamma);
  a.at("learning_rate").get_to(c.agent.learning_rate);
  a.at("epsilon_start").get_to(c.agent.epsilon_start);
  a.at("epsilon_end").get_to(c.agent.epsilon_end);
  a.at("epsilon_decay_fraction").get_to(c.agent.epsilon_decay_fraction);
  a.at("replay_capacity").get_to(c.agent.replay_capacity);
  a.at("batch_size").get_to(c.agent.batch_size);
  a.at("target_sync_period").get_to(c.agent.target_sync_period);
  a.at("n_step").get_to(c.agent.n_step);
  a.at("random_blend").get_to(c.agent.random_blend);
  const json& d = j.at("dnd");
  d.at("capacity").get_to(c.agent.dnd.capacity);
  d.at("neighbors").get_to(c.agent.dnd.neighbors);
  d.at("smoothing").get_to(c.agent.dnd.smoothing);
  d.at("write_rate").get_to(c.agent.dnd.write_rate);
  return c;
}

json optional_json(const std::optional<long long>& v) { return v ? json(*v) : json(nullptr); }

std::optional<long long> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<long long>();
}

json to_json(const SetSummary& s) {
  return {{"set", s.set},
          {"ddqn_wins", s.ddqn_wins},
          {"n2d_wins", s.n2d_wins},
          {"failed_runs", s.failed_runs},
          {"attacker_avg", optional_json(s.attacker_avg)},
          {"defender_avg", optional_json(s.defender_avg)},
          {"attacker_turns", s.attacker_turns},
          {"defender_turns", s.defender_turns}};
}

SetSummary summary_from_json(const json& j) {
  SetSummary s;
  j.at("set").get_to(s.set);
  j.at("ddqn_wins").get_to(s.ddqn_wins);
  j.at("n2d_wins").get_to(s.n2d_wins);
  j.at("failed_runs").get_to(s.failed_runs);
  s.attacker_avg = optional_from(j.at("attacker_avg"));
  s.defender_avg = optional_from(j.at("defender_avg"));
  j.at("attacker_turns").get_to(s.attacker_turns);
  j.at("defender_turns").get_to(s.defender_turns);
  return s;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return in;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kCsvVersion << '\n' << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.set << ',' << r.run << ',' << (r.winner ? to_string(*r.winner) : std::string_view("none")) << ','
        << r.win_turn << ',' << r.seed << '\n';
  }
}

std::vector<RunRecord> read_results_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(source, 1, "empty file");
  if (line != kCsvVersion) throw ParseError(source, lineno, "missing version line");
  ++lineno;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError(source, lineno, "expected header '" + std::string(kCsvHeader) + "'");

  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 5) throw ParseError(source, lineno, "expected 5 fields, got " + std::to_string(cells.size()));
    RunRecord r;
    r.set = field<int>(cells[0], source, lineno, "set");
    r.run = field<int>(cells[1], source, lineno, "run");
    if (cells[2] != "none") {
      try {
        r.winner = algorithm_from_string(cells[2]);
      } catch (const std::exception&) {
        throw ParseError(source, lineno, "bad winner '" + cells[2] + "' in row set=" + cells[0] + " run=" + cells[1]);
      }
    }
    r.win_turn = field<int>(cells[3], source, lineno, "turn");
    r.seed = field<std::uint64_t>(cells[4], source, lineno, "seed");
    out.push_back(std::move(r));
  }
  return out;
}

void write_summary_json(std::ostream& out, const ResultsBundle& bundle) {
  json j;
  j["version"] = kJsonVersion;
  j["config"] = to_json(bundle.config);
  j["summaries"] = json::array();
  for (const auto& s : bundle.summaries) j["summaries"].push_back(to_json(s));
  j["errors"] = json::array();
  for (const auto& r : bundle.records)
    if (!r.error.empty()) j["errors"].push_back({{"set", r.set}, {"run", r.run}, {"message", r.error}});
  out << j.dump(2) << '\n';
}

ResultsBundle read_summary_json(std::istream& in, const std::string& source) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ParseError(source, 0, ex.what());
  }
  try {
    if (j.at("version").get<int>() != kJsonVersion) throw ParseError(source, 0, "unsupported version");
    ResultsBundle b;
    b.config = config_from_json(j.at("config"));
    for (const auto& s : j.at("summaries")) b.summaries.push_back(summary_from_json(s));
    for (const auto& e : j.at("errors")) {
      RunRecord r;
      e.at("set").get_to(r.set);
      e.at("run").get_to(r.run);
      e.at("message").get_to(r.error);
      b.records.push_back(std::move(r));
    }
    return b;
  } catch (const json::exception& ex) {
    throw ParseError(source, 0, ex.what());
  }
}

void write_results(const std::filesystem::path& dir, const ResultsBundle& bundle) {
  std::filesystem::create_directories(dir);
  auto csv = open_out(dir / "results.csv");
  write_results_csv(csv, bundle.records);
  auto js = open_out(dir / "summary.json");
  write_summary_json(js, bundle);
  if (!csv || !js) throw std::runtime_error("write failed under " + dir.string());
}

ResultsBundle read_results(const std::filesystem::path& dir) {
  auto csv = open_in(dir / "results.csv");
  auto js = open_in(dir / "summary.json");
  std::vector<RunRecord> records = read_results_csv(csv, (dir / "results.csv").string());
  ResultsBundle b = read_summary_json(js, (dir / "summary.json").string());

  std::map<std::pair<int, int>, std::string> errors;
  for (auto& r : b.records) errors[{r.set, r.run}] = std::move(r.error);
  for (auto& r : records) {
    auto it = errors.find({r.set, r.run});
    if (it != errors.end()) r.error = it->second;
  }
  b.records = std::move(records);
  return b;
}

void emit_plot_data(std::ostream& out, const std::vector<SetSummary>& control, const std::vector<SetSummary>& attack,
                    Role role) {
  if (control.size() != attack.size()) throw DomainError("emit_plot_data: control and attack set counts differ");
  auto pick = [role](const SetSummary& s) { return role == Role::kAttacker ? s.attacker_avg : s.defender_avg; };
  auto cell = [](const std::optional<long long>& v) { return v ? std::to_string(*v) : std::string(); };
  out << "set,control_avg,attack_avg\n";
  for (std::size_t i = 0; i < control.size(); ++i)
    out << "set" << control[i].set << ',' << cell(pick(control[i])) << ',' << cell(pick(attack[i])) << '\n';
}

}  // namespace ctf
