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

#include "ctf/mlp.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "ctf/errors.hpp"

namespace ctf {

Mlp::Mlp(std::vector<int> widths) : widths_(std::move(widths)) {
  if (widths_.size() < 2) throw DomainError("Mlp: need at least input and output widths");
  for (int w : widths_)
    if (w <= 0) throw DomainError("Mlp: layer widths must be positive");
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    weights_.push_back(Eigen::MatrixXd::Zero(widths_[l + 1], widths_[l]));
    biases_.push_back(Eigen::VectorXd::Zero(widths_[l + 1]));
  }
}

Mlp::Mlp(std::vector<int> widths, Rng& rng) : Mlp(std::move(widths)) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths_[l]));
    // Column-major fill order keeps the draw sequence independent of Eigen internals.
    for (Eigen::Index c = 0; c < weights_[l].cols(); ++c)
      for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) weights_[l](r, c) = rng.uniform(-bound, bound);
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) biases_[l](r) = rng.uniform(-bound, bound);
  }
}

Mlp Mlp::zeros(std::vector<int> widths) { return Mlp(std::move(widths)); }

Eigen::MatrixXd Mlp::forward_batch(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != input_size())
    throw DomainError("Mlp::forward: expected input width " + std::to_string(input_size()) + ", got " +
                      std::to_string(inputs.rows()));
  Eigen::MatrixXd a = inputs;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = weights_[l] * a;
    z.colwise() += biases_[l];
    a = (l + 1 < weights_.size()) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : std::move(z);
  }
  return a;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const { return forward_batch(x); }

Eigen::MatrixXd Mlp::embed_batch(const Eigen::MatrixXd& inputs) const {
  if (weights_.size() < 2) throw DomainError("Mlp::embed: network has no hidden layer");
  if (inputs.rows() != input_size()) throw DomainError("Mlp::embed: input width mismatch");
  Eigen::MatrixXd z = weights_[0] * inputs;
  z.colwise() += biases_[0];
  return z.cwiseMax(0.0);
}

Eigen::VectorXd Mlp::embed(const Eigen::VectorXd& x) const { return embed_batch(x); }

void Mlp::check_batch(const Eigen::MatrixXd& inputs, std::span<const int> actions,
                      std::span<const double> targets) const {
  if (inputs.cols() == 0) throw DomainError("Mlp: empty batch");
  if (static_cast<std::size_t>(inputs.cols()) != actions.size() || actions.size() != targets.size())
    throw DomainError("Mlp: batch lengths differ");
  for (int a : actions)
    if (a < 0 || a >= output_size()) throw DomainError("Mlp: action index out of range");
}

double Mlp::loss(const Eigen::MatrixXd& inputs, std::span<const int> actions,
                 std::span<const double> targets) const {
  check_batch(inputs, actions, targets);
  const Eigen::MatrixXd q = forward_batch(inputs);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const double d = q(actions[static_cast<std::size_t>(i)], i) - targets[static_cast<std::size_t>(i)];
    sum += d * d;
  }
  return sum / static_cast<double>(q.cols());
}

Mlp::Gradients Mlp::gradients(const Eigen::MatrixXd& inputs, std::span<const int> actions,
                              std::span<const double> targets, double* loss_out) const {
  check_batch(inputs, actions, targets);
  const std::size_t layers = weights_.size();
  const auto batch = static_cast<double>(inputs.cols());

  // acts[l] is the input to layer l; acts[layers] is the output.
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(layers + 1);
  acts.push_back(inputs);
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = weights_[l] * acts.back();
    z.colwise() += biases_[l];
    acts.push_back(l + 1 < layers ? Eigen::MatrixXd(z.cwiseMax(0.0)) : std::move(z));
  }

  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(output_size(), inputs.cols());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < inputs.cols(); ++i) {
    const int a = actions[static_cast<std::size_t>(i)];
    const double d = acts.back()(a, i) - targets[static_cast<std::size_t>(i)];
    sum += d * d;
    delta(a, i) = 2.0 * d / batch;
  }
  if (loss_out) *loss_out = sum / batch;

  Gradients g;
  g.weights.resize(layers);
  g.biases.resize(layers);
  for (std::size_t l = layers; l-- > 0;) {
    g.weights[l] = delta * acts[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = weights_[l].transpose() * delta;
      delta = back.cwiseProduct((acts[l].array() > 0.0).cast<double>().matrix());
    }
  }
  return g;
}

double Mlp::train_batch(const Eigen::MatrixXd& inputs, std::span<const int> actions,
                        std::span<const double> targets, double learning_rate) {
  for (double y : targets)
    if (!std::isfinite(y)) throw TrainingError("train_batch: non-finite target");
  double before = 0.0;
  const Gradients g = gradients(inputs, actions, targets, &before);
  if (!std::isfinite(before)) throw TrainingError("train_batch: non-finite loss");
  if (learning_rate == 0.0) return before;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l].noalias() -= learning_rate * g.weights[l];
    biases_[l].noalias() -= learning_rate * g.biases[l];
  }
  return before;
}

bool Mlp::all_finite() const {
  for (std::size_t l = 0; l < weights_.size(); ++l)
    if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
  return true;
}

bool Mlp::operator==(const Mlp& other) const {
  if (widths_ != other.widths_) return false;
  for (std::size_t l = 0; l < weights_.size(); ++l)
    if (weights_[l] != other.weights_[l] || biases_[l] != other.biases_[l]) return false;
  return true;
}

namespace {

constexpr char kMagic[8] = {'C', 'T', 'F', 'M', 'L', 'P', '0', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

std::uint64_t get_bytes(std::istream& in, int n) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), n)) throw ParseError("checkpoint", 0, "truncated data");
  std::uint64_t v = 0;
  for (int i = n - 1; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_bytes(in, 8)); }

}  // namespace

void write_checkpoint(std::ostream& out, const Mlp& m) {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(m.widths().size()));
  for (int w : m.widths()) put_u32(out, static_cast<std::uint32_t>(w));
  for (std::size_t l = 0; l < m.layer_count(); ++l) {
    const Eigen::MatrixXd& w = m.weights(l);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) put_u64(out, std::bit_cast<std::uint64_t>(w(r, c)));
    const Eigen::VectorXd& b = m.biases(l);
    for (Eigen::Index r = 0; r < b.size(); ++r) put_u64(out, std::bit_cast<std::uint64_t>(b(r)));
  }
}

Mlp read_checkpoint(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw ParseError("checkpoint", 0, "bad magic");
  const auto count = get_bytes(in, 4);
  if (count < 2 || count > 64) throw ParseError("checkpoint", 0, "bad layer count");
  std::vector<int> widths;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto w = get_bytes(in, 4);
    if (w == 0 || w > (1u << 20)) throw ParseError("checkpoint", 0, "bad layer width");
    widths.push_back(static_cast<int>(w));
  }
  Mlp m = Mlp::zeros(widths);
  for (std::size_t l = 0; l < m.layer_count(); ++l) {
    Eigen::MatrixXd& w = m.weights(l);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = get_f64(in);
    Eigen::VectorXd& b = m.biases(l);
    for (Eigen::Index r = 0; r < b.size(); ++r) b(r) = get_f64(in);
  }
  return m;
}

}  // namespace ctf
