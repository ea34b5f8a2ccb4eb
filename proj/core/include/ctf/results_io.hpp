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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctf/experiment.hpp"
#include "ctf/stats.hpp"

namespace ctf {

struct ResultsBundle {
  ExperimentConfig config;
  std::vector<RunRecord> records;
  std::vector<SetSummary> summaries;

  bool operator==(const ResultsBundle&) const = default;
};

// "set,run,winner,turn,seed" under a version line. Failed runs carry the
// winner token "none"; their error text lives in the JSON summary.
void write_results_csv(std::ostream& out, const std::vector<RunRecord>& records);
// Throws ParseError naming `source` and the offending line.
std::vector<RunRecord> read_results_csv(std::istream& in, const std::string& source = "results.csv");

void write_summary_json(std::ostream& out, const ResultsBundle& bundle);
ResultsBundle read_summary_json(std::istream& in, const std::string& source = "summary.json");

// results.csv and summary.json inside `dir`, which is created if needed.
// read_results is the exact inverse of write_results.
void write_results(const std::filesystem::path& dir, const ResultsBundle& bundle);
ResultsBundle read_results(const std::filesystem::path& dir);

// "set,control_avg,attack_avg" rows labelled set1, set2, ... for one role.
// Absent averages are left empty. DomainError on mismatched lengths.
void emit_plot_data(std::ostream& out, const std::vector<SetSummary>& control, const std::vector<SetSummary>& attack,
                    Role role);

}  // namespace ctf
