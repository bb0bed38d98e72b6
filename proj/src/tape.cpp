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

#include "qresynth/tape.hpp"

#include <cmath>

#include "qresynth/error.hpp"
#include "qresynth/rng.hpp"

namespace qresynth::nn {

int ParamStore::add(const std::string& name, int rows, int cols, int fan_in) {
  if (by_name_.contains(name)) throw Error("duplicate parameter: " + name);
  const int id = static_cast<int>(entries_.size());
  entries_.push_back({name, Mat::Zero(rows, cols), fan_in > 0 ? fan_in : cols});
  by_name_[name] = id;
  return id;
}

int ParamStore::id_of(const std::string& name) const {
  const auto it = by_name_.find(name);
  if (it == by_name_.end()) throw Error("unknown parameter: " + name);
  return it->second;
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += static_cast<std::size_t>(e.value.size());
  return n;
}

void ParamStore::init_uniform(std::uint64_t seed) {
  Rng rng(seed);
  for (auto& e : entries_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(e.fan_in));
    for (std::int64_t i = 0; i < e.value.size(); ++i) {
      e.value.data()[i] = rng.next_uniform(-bound, bound);
    }
  }
}

double ParamStore::get_flat(std::size_t index) const {
  for (const auto& e : entries_) {
    const auto n = static_cast<std::size_t>(e.value.size());
    if (index < n) return e.value.data()[index];
    index -= n;
  }
  throw Error("flat parameter index out of range");
}

void ParamStore::add_flat(std::size_t index, double delta) {
  for (auto& e : entries_) {
    const auto n = static_cast<std::size_t>(e.value.size());
    if (index < n) {
      e.value.data()[index] += delta;
      return;
    }
    index -= n;
  }
  throw Error("flat parameter index out of range");
}

GradStore::GradStore(const ParamStore& params) {
  for (const auto& e : params.entries()) {
    grads_.push_back(Mat::Zero(e.value.rows(), e.value.cols()));
  }
}

void GradStore::zero() {
  for (auto& g : grads_) g.setZero();
}

void GradStore::scale(double factor) {
  for (auto& g : grads_) g *= factor;
}

double GradStore::get_flat(std::size_t index) const {
  for (const auto& g : grads_) {
    const auto n = static_cast<std::size_t>(g.size());
    if (index < n) return g.data()[index];
    index -= n;
  }
  throw Error("flat gradient index out of range");
}

std::size_t GradStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& g : grads_) n += static_cast<std::size_t>(g.size());
  return n;
}

int Tape::push(Vec value, std::function<void(Tape&, int)> back) {
  const int id = static_cast<int>(nodes_.size());
  Node node;
  node.grad = Vec::Zero(value.size());
  node.value = std::move(value);
  node.back = std::move(back);
  nodes_.push_back(std::move(node));
  return id;
}

int Tape::constant(Vec v) { return push(std::move(v), nullptr); }

int Tape::zeros(int n) { return push(Vec::Zero(n), nullptr); }

int Tape::param_vec(int pid) {
  const Mat& p = params_.value(pid);
  return push(Vec(p.col(0)), [pid](Tape& t, int self) {
    if (t.grads_) t.grads_->grad(pid).col(0) += t.grad_of(self);
  });
}

int Tape::embed_row(int pid, int row) {
  const Mat& p = params_.value(pid);
  return push(Vec(p.row(row).transpose()), [pid, row](Tape& t, int self) {
    if (t.grads_) {
      t.grads_->grad(pid).row(row) += t.grad_of(self).transpose();
    }
  });
}

int Tape::linear(int w_pid, int x, int bias_pid) {
  const Mat& w = params_.value(w_pid);
  Vec out = w * val(x);
  if (bias_pid >= 0) out += params_.value(bias_pid).col(0);
  return push(std::move(out), [w_pid, x, bias_pid](Tape& t, int self) {
    const Vec& g = t.grad_of(self);
    if (t.grads_) {
      t.grads_->grad(w_pid).noalias() += g * t.val(x).transpose();
      if (bias_pid >= 0) t.grads_->grad(bias_pid).col(0) += g;
    }
    t.grad_of(x).noalias() += t.params_.value(w_pid).transpose() * g;
  });
}

int Tape::add(int a, int b) {
  return push(val(a) + val(b), [a, b](Tape& t, int self) {
    t.grad_of(a) += t.grad_of(self);
    t.grad_of(b) += t.grad_of(self);
  });
}

int Tape::mul(int a, int b) {
  return push(val(a).cwiseProduct(val(b)), [a, b](Tape& t, int self) {
    t.grad_of(a) += t.grad_of(self).cwiseProduct(t.val(b));
    t.grad_of(b) += t.grad_of(self).cwiseProduct(t.val(a));
  });
}

int Tape::scale(int a, double k) {
  return push(val(a) * k, [a, k](Tape& t, int self) {
    t.grad_of(a) += k * t.grad_of(self);
  });
}

int Tape::affine(int a, double k, double c) {
  return push((val(a).array() * k + c).matrix(), [a, k](Tape& t, int self) {
    t.grad_of(a) += k * t.grad_of(self);
  });
}

int Tape::sigmoid(int a) {
  Vec out = (1.0 / (1.0 + (-val(a).array()).exp())).matrix();
  return push(std::move(out), [a](Tape& t, int self) {
    const auto& y = t.val(self).array();
    t.grad_of(a).array() += t.grad_of(self).array() * y * (1.0 - y);
  });
}

int Tape::tanh_op(int a) {
  return push(val(a).array().tanh().matrix(), [a](Tape& t, int self) {
    const auto& y = t.val(self).array();
    t.grad_of(a).array() += t.grad_of(self).array() * (1.0 - y * y);
  });
}

int Tape::exp_op(int a) {
  return push(val(a).array().exp().matrix(), [a](Tape& t, int self) {
    t.grad_of(a).array() += t.grad_of(self).array() * t.val(self).array();
  });
}

int Tape::concat(int a, int b) {
  Vec out(val(a).size() + val(b).size());
  out << val(a), val(b);
  return push(std::move(out), [a, b](Tape& t, int self) {
    const auto na = t.val(a).size();
    const auto nb = t.val(b).size();
    t.grad_of(a) += t.grad_of(self).head(na);
    t.grad_of(b) += t.grad_of(self).tail(nb);
  });
}

int Tape::sum(int a) {
  Vec out(1);
  out[0] = val(a).sum();
  return push(std::move(out), [a](Tape& t, int self) {
    t.grad_of(a).array() += t.grad_of(self)[0];
  });
}

int Tape::dot(int a, int b) {
  Vec out(1);
  out[0] = val(a).dot(val(b));
  return push(std::move(out), [a, b](Tape& t, int self) {
    const double g = t.grad_of(self)[0];
    t.grad_of(a) += g * t.val(b);
    t.grad_of(b) += g * t.val(a);
  });
}

int Tape::stack(std::span<const int> scalars) {
  Vec out(static_cast<std::int64_t>(scalars.size()));
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    out[static_cast<std::int64_t>(i)] = val(scalars[i])[0];
  }
  std::vector<int> ids(scalars.begin(), scalars.end());
  return push(std::move(out), [ids](Tape& t, int self) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      t.grad_of(ids[i])[0] += t.grad_of(self)[static_cast<std::int64_t>(i)];
    }
  });
}

int Tape::masked_nll(int logits, std::vector<char> mask, int target) {
  const Vec& l = val(logits);
  if (static_cast<std::int64_t>(mask.size()) != l.size()) {
    throw DimensionMismatch("mask size differs from logits");
  }
  if (mask[static_cast<std::size_t>(target)]) {
    throw Error("masked_nll target is masked out");
  }
  double maxv = -1e300;
  for (std::int64_t i = 0; i < l.size(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) maxv = std::max(maxv, l[i]);
  }
  double z = 0.0;
  for (std::int64_t i = 0; i < l.size(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) z += std::exp(l[i] - maxv);
  }
  const double lse = maxv + std::log(z);
  Vec out(1);
  out[0] = lse - l[target];
  return push(std::move(out),
              [logits, mask = std::move(mask), target, maxv, z](Tape& t, int self) {
                const double g = t.grad_of(self)[0];
                Vec& gl = t.grad_of(logits);
                const Vec& lv = t.val(logits);
                for (std::int64_t i = 0; i < lv.size(); ++i) {
                  if (mask[static_cast<std::size_t>(i)]) continue;
                  const double p = std::exp(lv[i] - maxv) / z;
                  gl[i] += g * (p - (i == target ? 1.0 : 0.0));
                }
              });
}

void Tape::backward(int root) {
  if (val(root).size() != 1) throw Error("backward root must be scalar");
  grad_of(root)[0] = 1.0;
  for (int id = static_cast<int>(nodes_.size()) - 1; id >= 0; --id) {
    auto& node = nodes_[static_cast<std::size_t>(id)];
    if (node.back && node.grad.cwiseAbs().maxCoeff() != 0.0) {
      node.back(*this, id);
    }
  }
}

AdamOptimizer::AdamOptimizer(std::size_t scalar_count, double learning_rate,
                             double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {
  m_.assign(scalar_count, 0.0);
  v_.assign(scalar_count, 0.0);
}

void AdamOptimizer::step(ParamStore& params, const GradStore& grads) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  std::size_t flat = 0;
  for (int id = 0; id < params.count(); ++id) {
    Mat& p = params.value(id);
    const Mat& g = grads.grad(id);
    for (std::int64_t i = 0; i < p.size(); ++i, ++flat) {
      const double gi = g.data()[i];
      m_[flat] = beta1_ * m_[flat] + (1.0 - beta1_) * gi;
      v_[flat] = beta2_ * v_[flat] + (1.0 - beta2_) * gi * gi;
      const double mhat = m_[flat] / bc1;
      const double vhat = v_[flat] / bc2;
      p.data()[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

}  // namespace qresynth::nn
