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

// ctf-arena: run experiments and post-process their results.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctf/action_log.hpp"
#include "ctf/errors.hpp"
#include "ctf/experiment.hpp"
#include "ctf/results_io.hpp"
#include "ctf/stats.hpp"
#include "ctf/topology.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::string condition_name(bool attack) { return attack ? "attack" : "control"; }

fs::path bundle_dir(const fs::path& out, int game, bool attack) {
  return out / ("game" + std::to_string(game) + "-" + condition_name(attack));
}

std::string opt(const std::optional<long long>& v) { return v ? std::to_string(*v) : "-"; }

ctf::ResultsBundle load_bundle(const fs::path& p) {
  if (fs::is_directory(p)) return ctf::read_results(p);
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  ctf::ResultsBundle b;
  b.records = ctf::read_results_csv(in, p.string());
  return b;
}

std::vector<ctf::SetSummary> summarize(const std::vector<ctf::RunRecord>& records, int game) {
  std::map<int, std::vector<ctf::RunRecord>> by_set;
  for (const auto& r : records) by_set[r.set].push_back(r);
  std::vector<ctf::SetSummary> out;
  for (const auto& [set, rs] : by_set) out.push_back(ctf::aggregate(rs, game));
  return out;
}

void print_summary(const ctf::SetSummary& s) {
  std::printf("set %d  DDQN wins %d  N2D wins %d  failed %d  attacker avg %s  defender avg %s\n", s.set, s.ddqn_wins,
              s.n2d_wins, s.failed_runs, opt(s.attacker_avg).c_str(), opt(s.defender_avg).c_str());
}

struct RunOptions {
  std::uint64_t seed = 0;
  std::optional<int> game;
  std::optional<int> set;
  std::string attack = "both";
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out = "results";
  bool action_logs = false;
  bool diagnostics = false;
  bool audit = false;
};

// Per-run log files, opened on demand and kept alive for the run.
struct RunLogs {
  std::unique_ptr<std::ofstream> actions, diagnostics, audit;
};

int cmd_run(const RunOptions& o) {
  ctf::ExperimentConfig base;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ctf::ConfigError("cannot read config " + o.config_path);
    base = ctf::parse_config(in);
  }
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ctf::ConfigError("--set-key expects key=value, got '" + kv + "'");
    ctf::apply_setting(base, kv.substr(0, eq), kv.substr(eq + 1));
  }
  base.base_seed = o.seed;
  base.validate();
  if (o.set && (*o.set < 1 || static_cast<std::size_t>(*o.set) > base.turn_limits.size()))
    throw ctf::ConfigError("--set out of range");

  std::vector<int> games = o.game ? std::vector<int>{*o.game} : std::vector<int>{1, 2};
  std::vector<bool> conditions;
  if (o.attack == "both" || o.attack == "off") conditions.push_back(false);
  if (o.attack == "both" || o.attack == "on") conditions.push_back(true);

  int failures = 0;
  for (int game : games) {
    for (bool attack : conditions) {
      ctf::ExperimentConfig cfg = base;
      cfg.game = game;
      cfg.attack_enabled = attack;
      cfg.poison.enabled = attack;
      const fs::path dir = bundle_dir(o.out, game, attack);
      fs::create_directories(dir);
      ctf::ResultsBundle bundle;
      bundle.config = cfg;
      const int first = o.set.value_or(1);
      const int last = o.set.value_or(static_cast<int>(cfg.turn_limits.size()));
      for (int set = first; set <= last; ++set) {
        std::vector<RunLogs> logs(static_cast<std::size_t>(cfg.runs_per_set));
        auto factory = [&](int run) {
          ctf::RunInstruments inst;
          RunLogs& l = logs[static_cast<std::size_t>(run - 1)];
          const std::string stem = "set" + std::to_string(set) + "-run" + std::to_string(run);
          if (o.action_logs) l.actions = std::make_unique<std::ofstream>(dir / (stem + ".actions.csv"));
          if (o.diagnostics) l.diagnostics = std::make_unique<std::ofstream>(dir / (stem + ".diagnostics.csv"));
          if (o.audit && attack) l.audit = std::make_unique<std::ofstream>(dir / (stem + ".audit.csv"));
          inst.action_log = l.actions.get();
          inst.diagnostics = l.diagnostics.get();
          inst.audit = l.audit.get();
          return inst;
        };
        std::vector<ctf::RunRecord> records = ctf::run_set(cfg, set, factory);
        for (const auto& r : records) {
          if (!r.error.empty()) {
            ++failures;
            std::fprintf(stderr, "game %d %s set %d run %d failed: %s\n", game, condition_name(attack).c_str(), set,
                         r.run, r.error.c_str());
          }
        }
        bundle.summaries.push_back(ctf::aggregate(records, game));
        bundle.records.insert(bundle.records.end(), records.begin(), records.end());
        std::printf("game %d %s ", game, condition_name(attack).c_str());
        print_summary(bundle.summaries.back());
      }
      ctf::write_results(dir, bundle);
    }
  }
  return failures == 0 ? kExitOk : kExitRuntime;
}

int cmd_aggregate(const std::string& path, int game) {
  const ctf::ResultsBundle b = load_bundle(path);
  for (const auto& s : summarize(b.records, game)) print_summary(s);
  return kExitOk;
}

int cmd_compare(const std::string& control_path, const std::string& attack_path, int game) {
  const auto control = summarize(load_bundle(control_path).records, game);
  const auto attack = summarize(load_bundle(attack_path).records, game);
  if (control.size() != attack.size()) throw ctf::DomainError("compare: set counts differ");
  std::printf("set,role,control_avg,attack_avg,delta_pct,control_wins,attack_wins\n");
  for (std::size_t i = 0; i < control.size(); ++i) {
    for (ctf::Role role : {ctf::Role::kAttacker, ctf::Role::kDefender}) {
      const bool atk = role == ctf::Role::kAttacker;
      const auto& c = atk ? control[i].attacker_avg : control[i].defender_avg;
      const auto& a = atk ? attack[i].attacker_avg : attack[i].defender_avg;
      std::string delta = "-";
      if (c && a && *c != 0) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%+.2f", ctf::round2(ctf::percent_change(double(*c), double(*a))));
        delta = buf;
      }
      const ctf::Algorithm alg = ctf::algorithm_for(game, role);
      std::printf("%d,%s,%s,%s,%s,%d,%d\n", control[i].set, std::string(ctf::to_string(role)).c_str(), opt(c).c_str(),
                  opt(a).c_str(), delta.c_str(), control[i].wins(alg), attack[i].wins(alg));
    }
  }
  return kExitOk;
}

int cmd_ttest(const std::string& control_path, const std::string& attack_path, int game, const std::string& role_name) {
  const ctf::Role role = ctf::role_from_string(role_name);
  const auto control = summarize(load_bundle(control_path).records, game);
  const auto attack = summarize(load_bundle(attack_path).records, game);
  if (control.size() != attack.size()) throw ctf::DomainError("ttest: set counts differ");
  std::printf("set,n_control,n_attack,t,df,p\n");
  for (std::size_t i = 0; i < control.size(); ++i) {
    const auto& ci = role == ctf::Role::kAttacker ? control[i].attacker_turns : control[i].defender_turns;
    const auto& ai = role == ctf::Role::kAttacker ? attack[i].attacker_turns : attack[i].defender_turns;
    std::vector<double> c(ci.begin(), ci.end()), a(ai.begin(), ai.end());
    if (c.size() < 2 || a.size() < 2) {
      std::printf("%d,%zu,%zu,-,-,-\n", control[i].set, c.size(), a.size());
      continue;
    }
    const ctf::WelchResult w = ctf::welch_t_test(c, a);
    std::printf("%d,%zu,%zu,%.6f,%.6f,%.6f\n", control[i].set, c.size(), a.size(), w.t, w.df, w.p);
  }
  return kExitOk;
}

int cmd_plot(const std::string& control_path, const std::string& attack_path, int game, const std::string& role_name,
             const std::string& out_path) {
  const ctf::Role role = ctf::role_from_string(role_name);
  const auto control = summarize(load_bundle(control_path).records, game);
  const auto attack = summarize(load_bundle(attack_path).records, game);
  if (out_path.empty()) {
    ctf::emit_plot_data(std::cout, control, attack, role);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    ctf::emit_plot_data(out, control, attack, role);
  }
  return kExitOk;
}

int cmd_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  const ctf::ActionLog log = ctf::read_action_log(in);
  const ctf::Topology t = ctf::Topology::build_default();
  const ctf::GameState g = ctf::replay(log, t, ctf::RewardConfig{});
  int compromised = 0, links_down = 0;
  for (auto b : g.node_compromised) compromised += b;
  for (auto b : g.link_up) links_down += !b;
  std::printf("turns %d  winner %s  compromised %d  links down %d\n", g.turn,
              std::string(ctf::to_string(g.winner)).c_str(), compromised, links_down);
  return kExitOk;
}

int cmd_topology(const std::string& out_path) {
  const ctf::Topology t = ctf::Topology::build_default();
  if (out_path.empty()) {
    ctf::write_adjacency(std::cout, t);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    ctf::write_adjacency(out, t);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capture-the-flag arena for adversarial reinforcement learning"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Play the experiment matrix, or a slice of it");
  run->add_option("--seed", ro.seed, "Base seed")->required();
  run->add_option("--game", ro.game, "Only this game (1 or 2)")->check(CLI::Range(1, 2));
  run->add_option("--set", ro.set, "Only this set (1-based)");
  run->add_option("--attack", ro.attack, "Conditions to play")->check(CLI::IsMember({"off", "on", "both"}));
  run->add_option("--config", ro.config_path, "key = value configuration file")->check(CLI::ExistingFile);
  run->add_option("--set-key", ro.overrides, "Override one configuration key (key=value)");
  run->add_option("--out", ro.out, "Output directory");
  run->add_flag("--action-logs", ro.action_logs, "Write per-run action logs");
  run->add_flag("--diagnostics", ro.diagnostics, "Write per-run training loss logs");
  run->add_flag("--audit", ro.audit, "Write per-run poison audit logs");

  std::string control_path, attack_path, results_path, role = "defender", out_path, log_path;
  int game = 1;
  auto* agg = app.add_subcommand("aggregate", "Summarize a results CSV or bundle directory");
  agg->add_option("results", results_path)->required();
  agg->add_option("--game", game)->check(CLI::Range(1, 2));

  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("control", control_path, "Control results (CSV or bundle directory)")->required();
    sub->add_option("attack", attack_path, "Attack results (CSV or bundle directory)")->required();
    sub->add_option("--game", game)->check(CLI::Range(1, 2));
  };
  auto* cmp = app.add_subcommand("compare", "Averages, percent deltas and win splits, control vs attack");
  add_pair(cmp);
  auto* tt = app.add_subcommand("ttest", "Welch t-test on winning turns, control vs attack");
  add_pair(tt);
  tt->add_option("--role", role)->check(CLI::IsMember({"attacker", "defender"}));
  auto* plot = app.add_subcommand("plot-data", "Grouped-bar data for one role");
  add_pair(plot);
  plot->add_option("--role", role)->check(CLI::IsMember({"attacker", "defender"}));
  plot->add_option("--out", out_path);
  auto* rep = app.add_subcommand("replay", "Replay an action log and print the final state");
  rep->add_option("log", log_path)->required()->check(CLI::ExistingFile);
  auto* topo = app.add_subcommand("topology", "Print the default network adjacency");
  topo->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(ro);
    if (*agg) return cmd_aggregate(results_path, game);
    if (*cmp) return cmd_compare(control_path, attack_path, game);
    if (*tt) return cmd_ttest(control_path, attack_path, game, role);
    if (*plot) return cmd_plot(control_path, attack_path, game, role, out_path);
    if (*rep) return cmd_replay(log_path);
    if (*topo) return cmd_topology(out_path);
  } catch (const ctf::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}
