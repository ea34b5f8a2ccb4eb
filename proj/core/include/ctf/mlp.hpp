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

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ctf/rng.hpp"

namespace ctf {

// Fully connected network: rectifier on hidden layers, identity output.
// Layer l maps widths[l] -> widths[l+1] with weights of shape
// (widths[l+1] x widths[l]). Batches are stored one sample per column.
class Mlp {
 public:
  struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
  };

  // Weights and biases uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  Mlp(std::vector<int> widths, Rng& rng);
  static Mlp zeros(std::vector<int> widths);

  const std::vector<int>& widths() const { return widths_; }
  int input_size() const { return widths_.front(); }
  int output_size() const { return widths_.back(); }
  std::size_t layer_count() const { return weights_.size(); }

  Eigen::MatrixXd& weights(std::size_t layer) { return weights_.at(layer); }
  const Eigen::MatrixXd& weights(std::size_t layer) const { return weights_.at(layer); }
  Eigen::VectorXd& biases(std::size_t layer) { return biases_.at(layer); }
  const Eigen::VectorXd& biases(std::size_t layer) const { return biases_.at(layer); }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

  // Activations of the first hidden layer. Requires at least one hidden layer.
  Eigen::VectorXd embed(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd embed_batch(const Eigen::MatrixXd& inputs) const;

  // Mean over the batch of (forward(x_i)[a_i] - y_i)^2.
  double loss(const Eigen::MatrixXd& inputs, std::span<const int> actions,
              std::span<const double> targets) const;

  Gradients gradients(const Eigen::MatrixXd& inputs, std::span<const int> actions,
                      std::span<const double> targets, double* loss_out = nullptr) const;

  // One plain gradient-descent step on the squared error above. Returns the
  // loss before the step. Throws TrainingError if the loss is not finite.
  double train_batch(const Eigen::MatrixXd& inputs, std::span<const int> actions,
                     std::span<const double> targets, double learning_rate);

  bool all_finite() const;
  bool operator==(const Mlp& other) const;

 private:
  explicit Mlp(std::vector<int> widths);
  void check_batch(const Eigen::MatrixXd& inputs, std::span<const int> actions,
                   std::span<const double> targets) const;

  std::vector<int> widths_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

// Checkpoint layout, all integers and doubles little-endian:
//   8 bytes  magic "CTFMLP01"
//   u32      number of widths L+1, then L+1 u32 widths
//   per layer: weights row-major (out x in) as f64, then biases as f64
// The bytes depend only on the parameters, never on the host platform.
void write_checkpoint(std::ostream& out, const Mlp& m);
// Throws ParseError on a bad magic, truncated data or invalid widths.
Mlp read_checkpoint(std::istream& in);

}  // namespace ctf
