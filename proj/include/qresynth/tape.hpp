// Copyright 2026 qresynth contributors
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

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace qresynth::nn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Named parameter tensors; vectors are stored as n x 1 matrices.
class ParamStore {
 public:
  struct Entry {
    std::string name;
    Mat value;
    int fan_in;  // drives the init range
  };

  int add(const std::string& name, int rows, int cols, int fan_in = -1);
  int id_of(const std::string& name) const;

  Mat& value(int id) { return entries_[static_cast<std::size_t>(id)].value; }
  const Mat& value(int id) const {
    return entries_[static_cast<std::size_t>(id)].value;
  }
  const std::vector<Entry>& entries() const { return entries_; }
  int count() const { return static_cast<int>(entries_.size()); }
  std::size_t scalar_count() const;

  /// uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)), tensors filled in
  /// registration order.
  void init_uniform(std::uint64_t seed);

  /// Flat scalar view in registration order, column-major per tensor; used
  /// by the optimizer state and the finite-difference check.
  double get_flat(std::size_t index) const;
  void add_flat(std::size_t index, double delta);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, int> by_name_;
};

/// Gradient buffers matching a ParamStore's shapes.
class GradStore {
 public:
  explicit GradStore(const ParamStore& params);
  void zero();
  Mat& grad(int id) { return grads_[static_cast<std::size_t>(id)]; }
  const Mat& grad(int id) const { return grads_[static_cast<std::size_t>(id)]; }
  void scale(double factor);
  double get_flat(std::size_t index) const;
  std::size_t scalar_count() const;

 private:
  std::vector<Mat> grads_;
};

/// Reverse-mode tape over vector-valued nodes. Parameters are leaves; their
/// adjoints accumulate into a GradStore when one is attached.
class Tape {
 public:
  Tape(const ParamStore& params, GradStore* grads)
      : params_(params), grads_(grads) {}

  int constant(Vec v);
  int zeros(int n);
  /// Whole vector-shaped parameter (n x 1).
  int param_vec(int pid);
  /// Row of a matrix parameter, as a column vector (embedding lookup).
  int embed_row(int pid, int row);
  /// W x + b; pass bias_pid = -1 for no bias.
  int linear(int w_pid, int x, int bias_pid);
  int add(int a, int b);
  int mul(int a, int b);
  int scale(int a, double k);
  /// k * x + c, elementwise.
  int affine(int a, double k, double c);
  int sigmoid(int a);
  int tanh_op(int a);
  int exp_op(int a);
  int concat(int a, int b);
  int sum(int a);
  int dot(int a, int b);
  /// Gathers scalar nodes into one vector node.
  int stack(std::span<const int> scalars);
  /// -log softmax(logits)[target] restricted to unmasked entries
  /// (mask[i] != 0 means masked out). target must be unmasked.
  int masked_nll(int logits, std::vector<char> mask, int target);

  const Vec& val(int id) const {
    return nodes_[static_cast<std::size_t>(id)].value;
  }

  /// Seeds d(root)=1 and accumulates parameter gradients. root must be a
  /// 1-dimensional node.
  void backward(int root);

 private:
  struct Node {
    Vec value;
    Vec grad;
    std::function<void(Tape&, int)> back;  // may be empty for leaves
  };

  int push(Vec value, std::function<void(Tape&, int)> back);
  Vec& grad_of(int id) { return nodes_[static_cast<std::size_t>(id)].grad; }

  const ParamStore& params_;
  GradStore* grads_;
  std::vector<Node> nodes_;
};

/// Adam with bias correction; state laid out over the flat scalar view.
class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t scalar_count, double learning_rate,
                double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(ParamStore& params, const GradStore& grads);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace qresynth::nn
