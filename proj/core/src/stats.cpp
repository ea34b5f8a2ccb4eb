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

#include "ctf/stats.hpp"

#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "ctf/errors.hpp"

namespace ctf {

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
};

Moments moments(std::span<const double> xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(xs.size() - 1);
  return m;
}

}  // namespace

long long floor_mean(std::span<const int> xs) {
  if (xs.empty()) throw DomainError("floor_mean: empty sample");
  long long sum = 0;
  for (int x : xs) sum += x;
  const auto n = static_cast<long long>(xs.size());
  long long q = sum / n;
  if (sum % n != 0 && sum < 0) --q;
  return q;
}

SetSummary aggregate(std::span<const RunRecord> records, int game) {
  if (records.empty()) throw DomainError("aggregate: no records");
  SetSummary s;
  s.set = records.front().set;
  const Algorithm attacker = algorithm_for(game, Role::kAttacker);
  for (const auto& r : records) {
    if (r.set != s.set) throw DomainError("aggregate: records span several sets");
    if (!r.winner) {
      ++s.failed_runs;
      continue;
    }
    (*r.winner == Algorithm::kDdqn ? s.ddqn_wins : s.n2d_wins)++;
    (*r.winner == attacker ? s.attacker_turns : s.defender_turns).push_back(r.win_turn);
  }
  if (!s.attacker_turns.empty()) s.attacker_avg = floor_mean(s.attacker_turns);
  if (!s.defender_turns.empty()) s.defender_avg = floor_mean(s.defender_turns);
  return s;
}

double percent_change(double before, double after) {
  if (before == 0.0) throw DomainError("percent_change: baseline is zero");
  return 100.0 * (after - before) / before;
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw DomainError("welch_t_test: each sample needs at least two values");
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  const double va = ma.var / static_cast<double>(a.size());
  const double vb = mb.var / static_cast<double>(b.size());
  const double se2 = va + vb;
  if (se2 == 0.0) {
    if (ma.mean == mb.mean) return {0.0, static_cast<double>(a.size() + b.size() - 2), 1.0};
    throw DomainError("welch_t_test: both samples have zero variance");
  }
  WelchResult out;
  out.t = (ma.mean - mb.mean) / std::sqrt(se2);
  out.df = se2 * se2 /
           (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  const boost::math::students_t dist(out.df);
  out.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(out.t)));
  return out;
}

}  // namespace ctf
