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

#include "ctf/dnd.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "ctf/errors.hpp"

namespace ctf {

Dnd::Dnd(int key_size, DndConfig cfg) : key_size_(key_size), cfg_(cfg) {
  if (key_size_ <= 0) throw DomainError("Dnd: key size must be positive");
  if (cfg_.neighbors < 1) throw DomainError("Dnd: neighbour count must be >= 1");
  if (cfg_.capacity < 1) throw DomainError("Dnd: capacity must be >= 1");
  if (!(cfg_.smoothing > 0.0)) throw DomainError("Dnd: smoothing constant must be positive");
}

void Dnd::check_key(const Eigen::VectorXd& key) const {
  if (key.size() != key_size_)
    throw DomainError("Dnd: key width " + std::to_string(key.size()) + " != " + std::to_string(key_size_));
}

std::string Dnd::fingerprint(const Eigen::VectorXd& key) const {
  std::string bytes(static_cast<std::size_t>(key_size_) * sizeof(double), '\0');
  std::memcpy(bytes.data(), key.data(), bytes.size());
  return bytes;
}

Eigen::Map<const Eigen::VectorXd> Dnd::key(std::size_t slot) const {
  if (slot >= size()) throw DomainError("Dnd::key: slot out of range");
  return Eigen::Map<const Eigen::VectorXd>(keys_.data() + slot * static_cast<std::size_t>(key_size_), key_size_);
}

DndQuery Dnd::query(const Eigen::VectorXd& key) const {
  check_key(key);
  if (empty()) throw ContractViolation("Dnd::lookup: empty store");

  const auto n = static_cast<Eigen::Index>(size());
  Eigen::Map<const Eigen::MatrixXd> stored(keys_.data(), key_size_, n);
  const Eigen::VectorXd d2 = (stored.colwise() - key).colwise().squaredNorm().transpose();

  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t p = std::min<std::size_t>(static_cast<std::size_t>(cfg_.neighbors), size());
  auto closer = [&](std::size_t a, std::size_t b) {
    const double da = d2(static_cast<Eigen::Index>(a)), db = d2(static_cast<Eigen::Index>(b));
    return da < db || (da == db && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p), order.end(), closer);

  DndQuery q;
  q.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p));
  q.weights.resize(p);
  double total = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    q.weights[i] = 1.0 / (d2(static_cast<Eigen::Index>(q.indices[i])) + cfg_.smoothing);
    total += q.weights[i];
  }
  for (std::size_t i = 0; i < p; ++i) {
    q.weights[i] /= total;
    q.value += q.weights[i] * values_[q.indices[i]];
  }
  return q;
}

double Dnd::lookup(const Eigen::VectorXd& key) {
  const DndQuery q = query(key);
  ++clock_;
  for (std::size_t slot : q.indices) last_use_[slot] = clock_;
  return q.value;
}

std::optional<std::size_t> Dnd::find_exact(const Eigen::VectorXd& key) const {
  check_key(key);
  const auto it = index_.find(fingerprint(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Dnd::write(const Eigen::VectorXd& key, double value, double alpha) {
  check_key(key);
  if (!std::isfinite(value)) throw DomainError("Dnd::write: non-finite value");
  ++clock_;
  std::string fp = fingerprint(key);
  if (const auto it = index_.find(fp); it != index_.end()) {
    values_[it->second] += alpha * (value - values_[it->second]);
    last_use_[it->second] = clock_;
    return;
  }

  std::size_t slot;
  if (size() < cfg_.capacity) {
    slot = size();
    keys_.insert(keys_.end(), key.data(), key.data() + key_size_);
    values_.push_back(value);
    last_use_.push_back(clock_);
  } else {
    slot = static_cast<std::size_t>(std::min_element(last_use_.begin(), last_use_.end()) - last_use_.begin());
    index_.erase(fingerprint(Eigen::VectorXd(this->key(slot))));
    std::copy(key.data(), key.data() + key_size_, keys_.begin() + static_cast<std::ptrdiff_t>(slot * key_size_));
    values_[slot] = value;
    last_use_[slot] = clock_;
  }
  index_.emplace(std::move(fp), slot);
}

}  // namespace ctf
