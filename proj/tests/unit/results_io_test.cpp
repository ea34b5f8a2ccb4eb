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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctf/errors.hpp"
#include "ctf/results_io.hpp"

namespace ctf {
namespace {

std::vector<RunRecord> sample_records() {
  return {
      {1, 1, Algorithm::kDdqn, 12, 0x1234567890abcdefULL, ""},
      {1, 2, Algorithm::kN2d, 5000, 42, ""},
      {1, 3, std::nullopt, 0, 7, "network diverged"},
  };
}

TEST(ResultsIo, CsvRoundTrip) {
  std::ostringstream out;
  write_results_csv(out, sample_records());
  EXPECT_EQ(out.str().rfind("# ctf-arena results v1\nset,run,winner,turn,seed\n1,1,DDQN,12,", 0), 0u);
  EXPECT_NE(out.str().find("1,3,none,0,7"), std::string::npos);
  std::istringstream in(out.str());
  std::vector<RunRecord> back = read_results_csv(in);
  ASSERT_EQ(back.size(), 3u);
  // The CSV carries no error text; the summary restores it.
  EXPECT_EQ(back[0], sample_records()[0]);
  EXPECT_EQ(back[1], sample_records()[1]);
  EXPECT_FALSE(back[2].winner.has_value());
}

TEST(ResultsIo, BadRowsReportTheLine) {
  std::istringstream in("# ctf-arena results v1\nset,run,winner,turn,seed\n1,1,DDQN,3,0\n1,2,CHAMP,4,0\n");
  try {
    read_results_csv(in, "r.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("r.csv"), std::string::npos);
  }
  std::istringstream short_row("# ctf-arena results v1\nset,run,winner,turn,seed\n1,1,DDQN\n");
  EXPECT_THROW(read_results_csv(short_row), ParseError);
}

TEST(ResultsIo, DirectoryRoundTrip) {
  ResultsBundle bundle;
  bundle.config.game = 2;
  bundle.config.attack_enabled = true;
  bundle.config.poison.limit = 3;
  bundle.config.agent.hidden = {7, 5};
  bundle.records = sample_records();
  bundle.summaries.push_back(aggregate(bundle.records, 2));
  const auto dir = std::filesystem::temp_directory_path() / "ctf_results_io_test";
  std::filesystem::remove_all(dir);
  write_results(dir, bundle);
  EXPECT_TRUE(std::filesystem::exists(dir / "results.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.json"));
  EXPECT_EQ(read_results(dir), bundle);
  std::filesystem::remove_all(dir);
}

TEST(ResultsIo, PlotData) {
  SetSummary c1, a1, c2, a2;
  c1.set = a1.set = 1;
  c2.set = a2.set = 2;
  c1.defender_avg = 5000;
  a1.defender_avg = 4239;
  c2.defender_avg = 7401;
  c1.attacker_avg = 4140;
  std::ostringstream out;
  emit_plot_data(out, {c1, c2}, {a1, a2}, Role::kDefender);
  EXPECT_EQ(out.str(), "set,control_avg,attack_avg\nset1,5000,4239\nset2,7401,\n");
  std::ostringstream att;
  emit_plot_data(att, {c1}, {a1}, Role::kAttacker);
  EXPECT_EQ(att.str(), "set,control_avg,attack_avg\nset1,4140,\n");
  std::ostringstream empty;
  emit_plot_data(empty, {}, {}, Role::kAttacker);
  EXPECT_EQ(empty.str(), "set,control_avg,attack_avg\n");
  std::ostringstream bad;
  EXPECT_THROW(emit_plot_data(bad, {c1}, {}, Role::kAttacker), DomainError);
}

}  // namespace
}  // namespace ctf
