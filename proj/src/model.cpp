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

#include "qresynth/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "qresynth/error.hpp"

namespace qresynth {

namespace {

using nn::Mat;
using nn::Vec;

static_assert(std::endian::native == std::endian::little,
              "checkpoint blobs are little-endian");

constexpr int kMaxPorts = kMaxSimQubits;

// ---------------------------------------------------------------------------
// Evaluation contexts: the same formulas run either directly on vectors
// (inference) or on the tape (training).

struct PlainCtx {
  using V = Vec;
  const nn::ParamStore& ps;

  V constant(Vec v) const { return v; }
  V zeros(int n) const { return Vec::Zero(n); }
  V embed_row(int pid, int row) const {
    return ps.value(pid).row(row).transpose();
  }
  V param_vec(int pid) const { return ps.value(pid).col(0); }
  V linear(int w, const V& x, int b) const {
    Vec out = ps.value(w) * x;
    if (b >= 0) out += ps.value(b).col(0);
    return out;
  }
  V add(const V& a, const V& b) const { return a + b; }
  V mul(const V& a, const V& b) const { return a.cwiseProduct(b); }
  V scale(const V& a, double k) const { return a * k; }
  V affine(const V& a, double k, double c) const {
    return (a.array() * k + c).matrix();
  }
  V sigmoid(const V& a) const {
    return (1.0 / (1.0 + (-a.array()).exp())).matrix();
  }
  V tanh_op(const V& a) const { return a.array().tanh().matrix(); }
  V exp_op(const V& a) const { return a.array().exp().matrix(); }
  V concat(const V& a, const V& b) const {
    V out(a.size() + b.size());
    out << a, b;
    return out;
  }
};

struct TapeCtx {
  using V = int;
  nn::Tape& tape;

  V constant(Vec v) { return tape.constant(std::move(v)); }
  V zeros(int n) { return tape.zeros(n); }
  V embed_row(int pid, int row) { return tape.embed_row(pid, row); }
  V param_vec(int pid) { return tape.param_vec(pid); }
  V linear(int w, V x, int b) { return tape.linear(w, x, b); }
  V add(V a, V b) { return tape.add(a, b); }
  V mul(V a, V b) { return tape.mul(a, b); }
  V scale(V a, double k) { return tape.scale(a, k); }
  V affine(V a, double k, double c) { return tape.affine(a, k, c); }
  V sigmoid(V a) { return tape.sigmoid(a); }
  V tanh_op(V a) { return tape.tanh_op(a); }
  V exp_op(V a) { return tape.exp_op(a); }
  V concat(V a, V b) { return tape.concat(a, b); }
};

template <class Ctx>
typename Ctx::V gru_cell(Ctx& cx, const GruCellIds& ids,
                         const typename Ctx::V& x, const typename Ctx::V& h) {
  auto r = cx.sigmoid(cx.add(cx.linear(ids.wr, x, -1), cx.linear(ids.ur, h, ids.br)));
  auto u = cx.sigmoid(cx.add(cx.linear(ids.wu, x, -1), cx.linear(ids.uu, h, ids.bu)));
  auto c = cx.tanh_op(
      cx.add(cx.linear(ids.wc, x, -1), cx.linear(ids.uc, cx.mul(r, h), ids.bc)));
  // h' = (1 - u) h + u c
  return cx.add(cx.mul(cx.affine(u, -1.0, 1.0), h), cx.mul(u, c));
}

template <class Ctx>
typename Ctx::V gated_sum(Ctx& cx, const AggregatorIds& ids,
                          const std::vector<typename Ctx::V>& states,
                          int hidden) {
  if (states.empty()) return cx.zeros(hidden);
  auto term = [&cx, &ids](const typename Ctx::V& h) {
    return cx.mul(cx.sigmoid(cx.linear(ids.gate_w, h, ids.gate_b)),
                  cx.linear(ids.map_w, h, ids.map_b));
  };
  auto acc = term(states[0]);
  for (std::size_t i = 1; i < states.size(); ++i) {
    acc = cx.add(acc, term(states[i]));
  }
  return acc;
}

template <class Ctx>
typename Ctx::V mean_of(Ctx& cx, const std::vector<typename Ctx::V>& states,
                        int hidden) {
  if (states.empty()) return cx.zeros(hidden);
  auto acc = states[0];
  for (std::size_t i = 1; i < states.size(); ++i) acc = cx.add(acc, states[i]);
  return cx.scale(acc, 1.0 / static_cast<double>(states.size()));
}

struct EncodeScaffold {
  DagAdjacency adj;
  std::vector<int> order;
};

template <class Ctx>
std::pair<typename Ctx::V, typename Ctx::V> encode_impl(
    Ctx& cx, const ModelParams& mp, const CircuitDag& dag,
    const EncodeScaffold& sc) {
  using V = typename Ctx::V;
  const int hidden = mp.config.hidden_dim;
  const int n = static_cast<int>(dag.nodes.size());
  std::vector<V> state(static_cast<std::size_t>(n));

  auto type_embed = [&](int pid, int v) {
    return cx.embed_row(pid, node_type_id(dag.nodes[static_cast<std::size_t>(v)]));
  };

  V readout = cx.zeros(hidden);
  if (mp.variant == ModelVariant::gru) {
    for (int v : sc.order) {
      std::vector<V> preds;
      for (int ei : sc.adj.in_edges[static_cast<std::size_t>(v)]) {
        preds.push_back(state[static_cast<std::size_t>(
            dag.edges[static_cast<std::size_t>(ei)].src)]);
      }
      const V h_in = gated_sum(cx, mp.enc_agg, preds, hidden);
      state[static_cast<std::size_t>(v)] =
          gru_cell(cx, mp.enc_cell, type_embed(mp.enc_embed, v), h_in);
    }
    readout = state[static_cast<std::size_t>(n - 1)];
    if (mp.config.bidirectional) {
      std::vector<V> rstate(static_cast<std::size_t>(n));
      for (auto it = sc.order.rbegin(); it != sc.order.rend(); ++it) {
        const int v = *it;
        std::vector<V> succs;
        for (int ei : sc.adj.out_edges[static_cast<std::size_t>(v)]) {
          succs.push_back(rstate[static_cast<std::size_t>(
              dag.edges[static_cast<std::size_t>(ei)].dst)]);
        }
        const V h_in = gated_sum(cx, mp.enc_agg_rev, succs, hidden);
        rstate[static_cast<std::size_t>(v)] =
            gru_cell(cx, mp.enc_cell_rev, type_embed(mp.enc_embed, v), h_in);
      }
      readout = cx.concat(readout, rstate[0]);
    }
  } else {
    // Initial states from predecessor node types.
    for (int v : sc.order) {
      std::vector<V> pred_types;
      for (int ei : sc.adj.in_edges[static_cast<std::size_t>(v)]) {
        pred_types.push_back(type_embed(
            mp.enc_embed, dag.edges[static_cast<std::size_t>(ei)].src));
      }
      state[static_cast<std::size_t>(v)] = cx.tanh_op(cx.linear(
          mp.enc_init_w, mean_of(cx, pred_types, hidden), mp.enc_init_b));
    }
    // Simultaneous rounds; nodes without predecessors keep their state.
    for (int round = 0; round < mp.config.gcn_rounds; ++round) {
      std::vector<V> next = state;
      for (int v = 0; v < n; ++v) {
        const auto& ins = sc.adj.in_edges[static_cast<std::size_t>(v)];
        if (ins.empty()) continue;
        if (mp.variant == ModelVariant::gcn) {
          std::vector<V> preds;
          for (int ei : ins) {
            preds.push_back(state[static_cast<std::size_t>(
                dag.edges[static_cast<std::size_t>(ei)].src)]);
          }
          next[static_cast<std::size_t>(v)] = cx.tanh_op(cx.linear(
              mp.enc_round_w, mean_of(cx, preds, hidden), mp.enc_round_b));
        } else {
          // DeepGMG: message from (source state, destination state,
          // port-pair edge feature), summed, then a recurrent update.
          std::vector<V> msgs;
          for (int ei : ins) {
            const auto& e = dag.edges[static_cast<std::size_t>(ei)];
            const int row = std::min(e.src_port, kMaxPorts - 1) * kMaxPorts +
                            std::min(e.dst_port, kMaxPorts - 1);
            const V feat = cx.embed_row(mp.enc_edge_embed, row);
            const V packed =
                cx.concat(cx.concat(state[static_cast<std::size_t>(e.src)],
                                    state[static_cast<std::size_t>(v)]),
                          feat);
            msgs.push_back(
                cx.tanh_op(cx.linear(mp.enc_msg_w, packed, mp.enc_msg_b)));
          }
          V agg = msgs[0];
          for (std::size_t i = 1; i < msgs.size(); ++i) {
            agg = cx.add(agg, msgs[i]);
          }
          next[static_cast<std::size_t>(v)] =
              gru_cell(cx, mp.enc_upd, agg, state[static_cast<std::size_t>(v)]);
        }
      }
      state = std::move(next);
    }
    readout = state[static_cast<std::size_t>(n - 1)];
  }

  return {cx.linear(mp.enc_mu_w, readout, mp.enc_mu_b),
          cx.linear(mp.enc_lv_w, readout, mp.enc_lv_b)};
}

template <class Ctx>
typename Ctx::V edge_score(Ctx& cx, const ModelParams& mp,
                           const typename Ctx::V& slot_state,
                           const typename Ctx::V& type_embed, int port,
                           int qubit) {
  auto pre = cx.add(cx.add(cx.linear(mp.dec_edge_slot_w, slot_state, mp.dec_edge_b),
                           cx.linear(mp.dec_edge_type_w, type_embed, -1)),
                    cx.add(cx.embed_row(mp.dec_edge_qubit, qubit),
                           cx.embed_row(mp.dec_edge_port, port)));
  return cx.linear(mp.dec_edge_v, cx.tanh_op(pre), -1);
}

struct Slot {
  int node;
  int port;
  int qubit;
};

std::vector<char> add_node_mask(const std::vector<Slot>& queue) {
  std::vector<char> mask(static_cast<std::size_t>(kNodeTypeCount), 0);
  mask[static_cast<std::size_t>(kStartTypeId)] = 1;
  std::uint32_t qubits_present = 0;
  for (const auto& s : queue) qubits_present |= 1u << s.qubit;
  if (std::popcount(qubits_present) < 2) {
    for (int k = 0; k < kGateKindCount; ++k) {
      if (gate_arity(static_cast<GateKind>(k)) == 2) {
        mask[static_cast<std::size_t>(k)] = 1;
      }
    }
  }
  return mask;
}

int pick_masked(const Vec& logits, const std::vector<char>& mask,
                DecodeMode mode, double temperature, Rng* rng) {
  if (mode == DecodeMode::greedy) {
    int best = -1;
    double best_v = 0.0;
    for (std::int64_t i = 0; i < logits.size(); ++i) {
      if (!mask.empty() && mask[static_cast<std::size_t>(i)]) continue;
      if (best < 0 || logits[i] > best_v) {
        best = static_cast<int>(i);
        best_v = logits[i];
      }
    }
    if (best < 0) throw Error("all choices masked");
    return best;
  }
  if (rng == nullptr) throw Error("sampled decoding needs an rng");
  double maxv = -1e300;
  for (std::int64_t i = 0; i < logits.size(); ++i) {
    if (!mask.empty() && mask[static_cast<std::size_t>(i)]) continue;
    maxv = std::max(maxv, logits[i]);
  }
  const double t = temperature > 0 ? temperature : 1.0;
  double z = 0.0;
  for (std::int64_t i = 0; i < logits.size(); ++i) {
    if (!mask.empty() && mask[static_cast<std::size_t>(i)]) continue;
    z += std::exp((logits[i] - maxv) / t);
  }
  const double u = rng->next_double() * z;
  double acc = 0.0;
  int last = -1;
  for (std::int64_t i = 0; i < logits.size(); ++i) {
    if (!mask.empty() && mask[static_cast<std::size_t>(i)]) continue;
    acc += std::exp((logits[i] - maxv) / t);
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  if (last < 0) throw Error("all choices masked");
  return last;
}

}  // namespace

std::string_view variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::gru:
      return "gru";
    case ModelVariant::gcn:
      return "gcn";
    case ModelVariant::deepgmg:
      return "deepgmg";
  }
  return "?";
}

std::optional<ModelVariant> variant_from_name(std::string_view name) {
  if (name == "gru") return ModelVariant::gru;
  if (name == "gcn") return ModelVariant::gcn;
  if (name == "deepgmg") return ModelVariant::deepgmg;
  return std::nullopt;
}

void validate_config(const ModelConfig& config) {
  if (config.hidden_dim < 1 || config.latent_dim < 1 ||
      config.gcn_rounds < 0 || config.edge_feature_dim < 1 ||
      config.temperature <= 0.0) {
    throw Error("model config fields must be positive");
  }
  if (config.node_type_count != kNodeTypeCount) {
    throw Error("node_type_count is fixed at " + std::to_string(kNodeTypeCount));
  }
}

ModelParams make_params(ModelVariant variant, const ModelConfig& config,
                        std::uint64_t seed) {
  validate_config(config);
  ModelParams p;
  p.variant = variant;
  p.config = config;
  auto& s = p.store;
  const int h = config.hidden_dim;
  const int l = config.latent_dim;

  auto linear_ids = [&s](const std::string& name, int out, int in) {
    const int w = s.add(name + ".w", out, in, in);
    const int b = s.add(name + ".b", out, 1, in);
    return std::pair{w, b};
  };
  auto cell_ids = [&s](const std::string& prefix, int xdim, int hdim) {
    GruCellIds c{};
    c.wr = s.add(prefix + ".wr", hdim, xdim, xdim);
    c.ur = s.add(prefix + ".ur", hdim, hdim, hdim);
    c.br = s.add(prefix + ".br", hdim, 1, hdim);
    c.wu = s.add(prefix + ".wu", hdim, xdim, xdim);
    c.uu = s.add(prefix + ".uu", hdim, hdim, hdim);
    c.bu = s.add(prefix + ".bu", hdim, 1, hdim);
    c.wc = s.add(prefix + ".wc", hdim, xdim, xdim);
    c.uc = s.add(prefix + ".uc", hdim, hdim, hdim);
    c.bc = s.add(prefix + ".bc", hdim, 1, hdim);
    return c;
  };
  auto agg_ids = [&s](const std::string& prefix, int hdim) {
    AggregatorIds a{};
    a.gate_w = s.add(prefix + ".gate_w", hdim, hdim, hdim);
    a.gate_b = s.add(prefix + ".gate_b", hdim, 1, hdim);
    a.map_w = s.add(prefix + ".map_w", hdim, hdim, hdim);
    a.map_b = s.add(prefix + ".map_b", hdim, 1, hdim);
    return a;
  };

  p.enc_embed = s.add("enc.embed", kNodeTypeCount, h, h);
  int readout = h;
  switch (variant) {
    case ModelVariant::gru:
      p.enc_agg = agg_ids("enc.agg", h);
      p.enc_cell = cell_ids("enc.cell", h, h);
      if (config.bidirectional) {
        p.enc_agg_rev = agg_ids("enc.agg_rev", h);
        p.enc_cell_rev = cell_ids("enc.cell_rev", h, h);
        readout = 2 * h;
      }
      break;
    case ModelVariant::gcn:
      std::tie(p.enc_init_w, p.enc_init_b) = linear_ids("enc.init", h, h);
      std::tie(p.enc_round_w, p.enc_round_b) = linear_ids("enc.round", h, h);
      break;
    case ModelVariant::deepgmg:
      std::tie(p.enc_init_w, p.enc_init_b) = linear_ids("enc.init", h, h);
      p.enc_edge_embed =
          s.add("enc.edge_embed", kMaxPorts * kMaxPorts, config.edge_feature_dim,
                config.edge_feature_dim);
      std::tie(p.enc_msg_w, p.enc_msg_b) =
          linear_ids("enc.msg", h, 2 * h + config.edge_feature_dim);
      p.enc_upd = cell_ids("enc.upd", h, h);
      break;
  }
  std::tie(p.enc_mu_w, p.enc_mu_b) = linear_ids("enc.mu", l, readout);
  std::tie(p.enc_lv_w, p.enc_lv_b) = linear_ids("enc.logvar", l, readout);

  p.dec_embed = s.add("dec.embed", kNodeTypeCount, h, h);
  p.dec_agg = agg_ids("dec.agg", h);
  p.dec_cell = cell_ids("dec.cell", h, h);
  std::tie(p.dec_init_w, p.dec_init_b) = linear_ids("dec.init", h, l);
  std::tie(p.dec_add_w, p.dec_add_b) = linear_ids("dec.add", kNodeTypeCount, h);
  p.dec_edge_slot_w = s.add("dec.edge.slot_w", h, h, h);
  p.dec_edge_type_w = s.add("dec.edge.type_w", h, h, h);
  p.dec_edge_qubit = s.add("dec.edge.qubit", kMaxPorts, h, h);
  p.dec_edge_port = s.add("dec.edge.port", 2, h, h);
  p.dec_edge_b = s.add("dec.edge.b", h, 1, h);
  p.dec_edge_v = s.add("dec.edge.v", 1, h, h);

  s.init_uniform(seed);
  return p;
}

Encoding encode(const ModelParams& params, const CircuitDag& dag) {
  validate_dag(dag);
  EncodeScaffold sc{build_adjacency(dag), topological_order(dag)};
  PlainCtx cx{params.store};
  auto [mu, lv] = encode_impl(cx, params, dag, sc);
  return {std::move(mu), std::move(lv)};
}

Vec reparameterize(const Vec& mu, const Vec& logvar, Rng& rng) {
  Vec z(mu.size());
  for (std::int64_t i = 0; i < mu.size(); ++i) {
    z[i] = mu[i] + std::exp(0.5 * logvar[i]) * rng.next_normal();
  }
  return z;
}

double kld(const Vec& mu, const Vec& logvar) {
  double acc = 0.0;
  for (std::int64_t i = 0; i < mu.size(); ++i) {
    acc += std::exp(logvar[i]) + mu[i] * mu[i] - 1.0 - logvar[i];
  }
  return 0.5 * acc;
}

CircuitDag decode(const Vec& z, const ModelParams& params, int n_qubits,
                  int max_gates, DecodeMode mode, Rng* rng) {
  if (n_qubits < 1 || n_qubits > kMaxPorts) {
    throw OperandOutOfRange("decode supports 1.." + std::to_string(kMaxPorts) +
                            " qubits");
  }
  if (max_gates < 0) throw Error("max_gates must be >= 0");
  PlainCtx cx{params.store};
  const int hidden = params.config.hidden_dim;
  const double temperature = params.config.temperature;

  CircuitDag dag;
  dag.nodes.push_back({DagNodeType::start, GateKind::x});
  std::vector<Vec> state(1);
  state[0] = cx.tanh_op(cx.linear(params.dec_init_w, z, params.dec_init_b));
  Vec graph_state = state[0];

  std::vector<Slot> queue;
  queue.reserve(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) queue.push_back({0, q, q});

  int emitted = 0;
  for (;;) {
    int type = kEndTypeId;
    if (emitted < max_gates) {
      const Vec logits =
          cx.linear(params.dec_add_w, graph_state, params.dec_add_b);
      type = pick_masked(logits, add_node_mask(queue), mode, temperature, rng);
    }
    if (type == kEndTypeId) break;

    const auto kind = static_cast<GateKind>(type);
    const int node = static_cast<int>(dag.nodes.size());
    dag.nodes.push_back({DagNodeType::gate, kind});
    const Vec e_t = cx.embed_row(params.dec_embed, type);
    const int arity = gate_arity(kind);

    std::vector<Vec> preds;
    std::vector<int> out_qubits(static_cast<std::size_t>(arity));
    for (int port = 0; port < arity; ++port) {
      Vec scores(static_cast<std::int64_t>(queue.size()));
      for (std::size_t i = 0; i < queue.size(); ++i) {
        scores[static_cast<std::int64_t>(i)] =
            edge_score(cx, params, state[static_cast<std::size_t>(queue[i].node)],
                       e_t, port, queue[i].qubit)[0];
      }
      const int picked = pick_masked(scores, {}, mode, temperature, rng);
      const Slot slot = queue[static_cast<std::size_t>(picked)];
      dag.edges.push_back({slot.node, slot.port, node, port});
      preds.push_back(state[static_cast<std::size_t>(slot.node)]);
      out_qubits[static_cast<std::size_t>(port)] = slot.qubit;
      queue.erase(queue.begin() + picked);
    }
    if (arity == 2 && out_qubits[0] == out_qubits[1]) {
      throw Error("decoder wired a gate to one qubit twice");
    }

    state.push_back(gru_cell(cx, params.dec_cell, e_t,
                             gated_sum(cx, params.dec_agg, preds, hidden)));
    for (int port = 0; port < arity; ++port) {
      queue.push_back({node, port, out_qubits[static_cast<std::size_t>(port)]});
    }
    graph_state = state.back();
    ++emitted;
  }

  const int end = static_cast<int>(dag.nodes.size());
  dag.nodes.push_back({DagNodeType::end, GateKind::x});
  std::sort(queue.begin(), queue.end(),
            [](const Slot& a, const Slot& b) { return a.qubit < b.qubit; });
  for (const auto& slot : queue) {
    dag.edges.push_back({slot.node, slot.port, end, slot.qubit});
  }
  return dag;
}

namespace {

// Teacher-forced decoder loss along the canonical topological sequence.
int teacher_forced_loss(TapeCtx& cx, const ModelParams& mp,
                        const CircuitDag& dag, const EncodeScaffold& sc,
                        const std::vector<int>& wire_labels, int z_node) {
  const int hidden = mp.config.hidden_dim;
  std::vector<int> state(dag.nodes.size(), -1);
  state[0] = cx.tanh_op(cx.linear(mp.dec_init_w, z_node, mp.dec_init_b));
  int graph_state = state[0];

  const int n_qubits = dag_num_qubits(dag);
  std::vector<Slot> queue;
  for (int q = 0; q < n_qubits; ++q) queue.push_back({0, q, q});

  std::vector<int> terms;
  for (std::size_t oi = 1; oi < sc.order.size(); ++oi) {
    const int v = sc.order[oi];
    const auto& node = dag.nodes[static_cast<std::size_t>(v)];
    const int type = node_type_id(node);

    const int logits = cx.linear(mp.dec_add_w, graph_state, mp.dec_add_b);
    terms.push_back(cx.tape.masked_nll(logits, add_node_mask(queue), type));
    if (node.type == DagNodeType::end) break;

    const int e_t = cx.embed_row(mp.dec_embed, type);
    std::vector<int> preds;
    for (int ei : sc.adj.in_edges[static_cast<std::size_t>(v)]) {
      const auto& edge = dag.edges[static_cast<std::size_t>(ei)];
      int target = -1;
      for (std::size_t i = 0; i < queue.size(); ++i) {
        if (queue[i].node == edge.src && queue[i].port == edge.src_port) {
          target = static_cast<int>(i);
          break;
        }
      }
      if (target < 0) throw InvalidDag("teacher forcing lost a queue slot");

      std::vector<int> scores;
      scores.reserve(queue.size());
      for (const auto& slot : queue) {
        scores.push_back(edge_score(cx, mp,
                                    state[static_cast<std::size_t>(slot.node)],
                                    e_t, edge.dst_port, slot.qubit));
      }
      const int score_vec = cx.tape.stack(scores);
      terms.push_back(cx.tape.masked_nll(
          score_vec, std::vector<char>(queue.size(), 0), target));

      preds.push_back(state[static_cast<std::size_t>(edge.src)]);
      queue.erase(queue.begin() + target);
    }

    state[static_cast<std::size_t>(v)] = gru_cell(
        cx, mp.dec_cell, e_t, gated_sum(cx, mp.dec_agg, preds, hidden));
    for (int ei : sc.adj.in_edges[static_cast<std::size_t>(v)]) {
      const auto& edge = dag.edges[static_cast<std::size_t>(ei)];
      queue.push_back({v, edge.dst_port,
                       wire_labels[static_cast<std::size_t>(ei)]});
    }
    graph_state = state[static_cast<std::size_t>(v)];
  }

  int total = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) {
    total = cx.tape.add(total, terms[i]);
  }
  return total;
}

}  // namespace

LossParts loss_and_gradient(const CircuitDag& dag, const ModelParams& params,
                            const Vec& eps, double beta,
                            nn::GradStore* grads) {
  validate_dag(dag);
  if (eps.size() != params.config.latent_dim) {
    throw DimensionMismatch("eps must have latent_dim entries");
  }
  EncodeScaffold sc{build_adjacency(dag), topological_order(dag)};
  const auto labels = edge_wire_labels(dag);

  nn::Tape tape(params.store, grads);
  TapeCtx cx{tape};
  auto [mu, lv] = encode_impl(cx, params, dag, sc);

  // KLD = 0.5 (sum exp(lv) + mu.mu - D - sum lv)
  const int d = params.config.latent_dim;
  int kld_node = tape.add(tape.sum(tape.exp_op(lv)), tape.dot(mu, mu));
  kld_node = tape.add(kld_node, tape.scale(tape.sum(lv), -1.0));
  kld_node = tape.affine(kld_node, 0.5, -0.5 * d);

  const int z =
      tape.add(mu, tape.mul(tape.exp_op(tape.scale(lv, 0.5)), tape.constant(eps)));
  const int structural = teacher_forced_loss(cx, params, dag, sc, labels, z);
  const int total = tape.add(structural, tape.scale(kld_node, beta));
  if (grads != nullptr) tape.backward(total);

  LossParts parts;
  parts.total = tape.val(total)[0];
  parts.structural = tape.val(structural)[0];
  parts.kld = tape.val(kld_node)[0];
  return parts;
}

double structural_loss(const CircuitDag& dag, const ModelParams& params) {
  const Vec eps = Vec::Zero(params.config.latent_dim);
  return loss_and_gradient(dag, params, eps, 0.0, nullptr).structural;
}

QuantumCircuit free_run_reconstruction(const ModelParams& params,
                                       const QuantumCircuit& circuit) {
  const CircuitDag dag = circuit_to_dag(circuit);
  const Encoding enc = encode(params, dag);
  const CircuitDag out =
      decode(enc.mu, params, circuit.num_qubits,
             static_cast<int>(circuit.gates.size()), DecodeMode::greedy, nullptr);
  return dag_to_circuit(out);
}

namespace {

nlohmann::ordered_json config_to_json(const ModelConfig& c) {
  nlohmann::ordered_json j;
  j["hidden_dim"] = c.hidden_dim;
  j["latent_dim"] = c.latent_dim;
  j["gcn_rounds"] = c.gcn_rounds;
  j["bidirectional"] = c.bidirectional;
  j["node_type_count"] = c.node_type_count;
  j["edge_feature_dim"] = c.edge_feature_dim;
  j["temperature"] = c.temperature;
  return j;
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.hidden_dim = j.at("hidden_dim").get<int>();
  c.latent_dim = j.at("latent_dim").get<int>();
  c.gcn_rounds = j.at("gcn_rounds").get<int>();
  c.bidirectional = j.at("bidirectional").get<bool>();
  c.node_type_count = j.at("node_type_count").get<int>();
  c.edge_feature_dim = j.at("edge_feature_dim").get<int>();
  c.temperature = j.at("temperature").get<double>();
  return c;
}

}  // namespace

void save_checkpoint(const ModelParams& params, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  nlohmann::ordered_json manifest;
  manifest["variant"] = std::string(variant_name(params.variant));
  manifest["config"] = config_to_json(params.config);
  manifest["tensors"] = nlohmann::ordered_json::array();

  for (const auto& entry : params.store.entries()) {
    const std::string file = entry.name + ".bin";
    manifest["tensors"].push_back({{"name", entry.name},
                                   {"rows", entry.value.rows()},
                                   {"cols", entry.value.cols()},
                                   {"file", file}});
    std::ofstream out(fs::path(dir) / file, std::ios::binary);
    if (!out) throw IoError("cannot write tensor file: " + file);
    for (std::int64_t r = 0; r < entry.value.rows(); ++r) {
      for (std::int64_t c = 0; c < entry.value.cols(); ++c) {
        const float v = static_cast<float>(entry.value(r, c));
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
      }
    }
  }

  std::ofstream mout(fs::path(dir) / "manifest.json");
  if (!mout) throw IoError("cannot write checkpoint manifest");
  mout << manifest.dump(2) << "\n";
}

ModelParams load_checkpoint(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream min(fs::path(dir) / "manifest.json");
  if (!min) throw MissingCheckpoint("no manifest.json in " + dir);
  nlohmann::json manifest;
  try {
    min >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw MissingCheckpoint(std::string("bad checkpoint manifest: ") + e.what());
  }

  const auto variant = variant_from_name(manifest.at("variant").get<std::string>());
  if (!variant) throw MissingCheckpoint("unknown variant in manifest");
  ModelParams params =
      make_params(*variant, config_from_json(manifest.at("config")), 0);

  std::size_t loaded = 0;
  for (const auto& jt : manifest.at("tensors")) {
    const auto name = jt.at("name").get<std::string>();
    const int id = [&] {
      try {
        return params.store.id_of(name);
      } catch (const Error&) {
        throw MissingCheckpoint("manifest names unknown tensor: " + name);
      }
    }();
    Mat& m = params.store.value(id);
    if (m.rows() != jt.at("rows").get<std::int64_t>() ||
        m.cols() != jt.at("cols").get<std::int64_t>()) {
      throw MissingCheckpoint("tensor shape mismatch: " + name);
    }
    std::ifstream in(fs::path(dir) / jt.at("file").get<std::string>(),
                     std::ios::binary);
    if (!in) throw MissingCheckpoint("missing tensor file for " + name);
    for (std::int64_t r = 0; r < m.rows(); ++r) {
      for (std::int64_t c = 0; c < m.cols(); ++c) {
        float v;
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!in) throw MissingCheckpoint("tensor file truncated: " + name);
        m(r, c) = static_cast<double>(v);
      }
    }
    if (!m.allFinite()) {
      throw MissingCheckpoint("tensor has non-finite entries: " + name);
    }
    ++loaded;
  }
  if (loaded != static_cast<std::size_t>(params.store.count())) {
    throw MissingCheckpoint("checkpoint is missing tensors");
  }
  return params;
}

}  // namespace qresynth
