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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace ctf {

struct DndConfig {
  std::size_t capacity = 50000;
  int neighbors = 10;        // p
  double smoothing = 1e-3;   // added to squared distance in the kernel
  double write_rate = 0.1;   // alpha for exact-match updates

  bool operator==(const DndConfig&) const = default;
};

struct DndQuery {
  double value = 0.0;
  std::vector<std::size_t> indices;  // nearest first, ties by slot index
  std::vector<double> weights;       // normalized kernel weights
};

// Episodic key/value memory for one action. Lookups average the values of
// the p nearest keys (Euclidean) with weights 1 / (d^2 + smoothing).
// Exact-match writes (bitwise-equal key) move the stored value by
// alpha * (value - old); new keys are appended, evicting the least recently
// used entry once the store is full.
class Dnd {
 public:
  Dnd(int key_size, DndConfig cfg = {});

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::size_t capacity() const { return cfg_.capacity; }
  int key_size() const { return key_size_; }
  const DndConfig& config() const { return cfg_; }

  // Throws ContractViolation on an empty store. Marks the neighbours as used.
  double lookup(const Eigen::VectorXd& key);

  // Same estimate as lookup() without touching recency.
  DndQuery query(const Eigen::VectorXd& key) const;

  void write(const Eigen::VectorXd& key, double value, double alpha);
  void write(const Eigen::VectorXd& key, double value) { write(key, value, cfg_.write_rate); }

  std::optional<std::size_t> find_exact(const Eigen::VectorXd& key) const;

  Eigen::Map<const Eigen::VectorXd> key(std::size_t slot) const;
  double value(std::size_t slot) const { return values_.at(slot); }
  std::uint64_t last_use(std::size_t slot) const { return last_use_.at(slot); }

 private:
  std::string fingerprint(const Eigen::VectorXd& key) const;
  void check_key(const Eigen::VectorXd& key) const;

  int key_size_;
  DndConfig cfg_;
  std::vector<double> keys_;  // slot-major, key_size_ doubles per slot
  std::vector<double> values_;
  std::vector<std::uint64_t> last_use_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t clock_ = 0;
};

}  // namespace ctf
