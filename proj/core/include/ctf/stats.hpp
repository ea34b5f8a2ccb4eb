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

#include <optional>
#include <span>
#include <vector>

#include "ctf/experiment.hpp"

namespace ctf {

struct SetSummary {
  int set = 0;
  int ddqn_wins = 0;
  int n2d_wins = 0;
  int failed_runs = 0;
  std::optional<long long> attacker_avg;  // floor of the mean winning turn
  std::optional<long long> defender_avg;
  std::vector<int> attacker_turns;  // in run order
  std::vector<int> defender_turns;

  int wins(Algorithm a) const { return a == Algorithm::kDdqn ? ddqn_wins : n2d_wins; }
  bool operator==(const SetSummary&) const = default;
};

// Floor of the arithmetic mean; DomainError on an empty sample.
long long floor_mean(std::span<const int> xs);

// Records must share one set index. Throws DomainError when empty.
SetSummary aggregate(std::span<const RunRecord> records, int game);

// 100 * (after - before) / before. DomainError when before == 0.
double percent_change(double before, double after);

// Rounds half away from zero to two decimals.
double round2(double x);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-tailed
};

// Unequal-variance two-sample t-test. DomainError when a sample has fewer
// than two values or both variances are zero with different means.
// Identical constant samples give t = 0, p = 1.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace ctf
