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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qresynth/dag.hpp"
#include "qresynth/rng.hpp"
#include "qresynth/simulator.hpp"
#include "qresynth/tape.hpp"

namespace qresynth {

enum class ModelVariant { gru, gcn, deepgmg };

std::string_view variant_name(ModelVariant v);
std::optional<ModelVariant> variant_from_name(std::string_view name);

struct ModelConfig {
  int hidden_dim = 128;
  int latent_dim = 32;
  int gcn_rounds = 3;
  bool bidirectional = true;  // GRU encoder only
  int node_type_count = kNodeTypeCount;
  int edge_feature_dim = 8;  // DeepGMG encoder only
  double temperature = 1.0;
};
void validate_config(const ModelConfig& config);

struct GruCellIds {
  int wr, ur, br, wu, uu, bu, wc, uc, bc;
};
struct AggregatorIds {
  int gate_w, gate_b, map_w, map_b;
};

/// Parameter set for one encoder variant plus the shared sequential decoder.
/// Tensor ids index into `store`; unused ids stay -1 for variants that do
/// not own them.
struct ModelParams {
  ModelVariant variant = ModelVariant::gru;
  ModelConfig config;
  nn::ParamStore store;

  // encoder
  int enc_embed = -1;
  AggregatorIds enc_agg{-1, -1, -1, -1};
  GruCellIds enc_cell{-1, -1, -1, -1, -1, -1, -1, -1, -1};
  AggregatorIds enc_agg_rev{-1, -1, -1, -1};
  GruCellIds enc_cell_rev{-1, -1, -1, -1, -1, -1, -1, -1, -1};
  int enc_init_w = -1, enc_init_b = -1;
  int enc_round_w = -1, enc_round_b = -1;
  int enc_edge_embed = -1, enc_msg_w = -1, enc_msg_b = -1;
  GruCellIds enc_upd{-1, -1, -1, -1, -1, -1, -1, -1, -1};
  int enc_mu_w = -1, enc_mu_b = -1, enc_lv_w = -1, enc_lv_b = -1;

  // decoder (GRU-style for every variant)
  int dec_embed = -1;
  AggregatorIds dec_agg{-1, -1, -1, -1};
  GruCellIds dec_cell{-1, -1, -1, -1, -1, -1, -1, -1, -1};
  int dec_init_w = -1, dec_init_b = -1;
  int dec_add_w = -1, dec_add_b = -1;
  int dec_edge_slot_w = -1, dec_edge_type_w = -1;
  int dec_edge_qubit = -1, dec_edge_port = -1;
  int dec_edge_b = -1, dec_edge_v = -1;
};

/// Registers all tensors for the variant and initializes them
/// uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) from the seed.
ModelParams make_params(ModelVariant variant, const ModelConfig& config,
                        std::uint64_t seed);

struct Encoding {
  nn::Vec mu;
  nn::Vec logvar;
};

/// Runs the variant's encoder: asynchronous GRU passes (bidirectional
/// optionally), simultaneous GCN rounds, or DeepGMG rounds with port-pair
/// edge features. Deterministic given params. Throws InvalidDag.
Encoding encode(const ModelParams& params, const CircuitDag& dag);

/// z = mu + exp(logvar/2) * eps with eps drawn from rng.
nn::Vec reparameterize(const nn::Vec& mu, const nn::Vec& logvar, Rng& rng);

/// 0.5 * sum(exp(logvar) + mu^2 - 1 - logvar).
double kld(const nn::Vec& mu, const nn::Vec& logvar);

enum class DecodeMode { greedy, sample };

/// Sequential constrained decoder. Always returns a DAG satisfying every
/// CircuitDag invariant: the start node exposes n_qubits slots, gate inputs
/// bind queue slots (so no dangling ports), illegal node types are masked,
/// and the remaining slots are wired to the end node in qubit order when
/// decoding stops. rng may be null in greedy mode.
CircuitDag decode(const nn::Vec& z, const ModelParams& params, int n_qubits,
                  int max_gates, DecodeMode mode, Rng* rng);

/// Teacher-forced decoder loss: sum of masked add-node NLL plus edge-slot
/// NLL along the DAG's canonical topological sequence, conditioned on
/// z = mu (the zero-noise latent).
double structural_loss(const CircuitDag& dag, const ModelParams& params);

struct LossParts {
  double total = 0.0;
  double structural = 0.0;
  double kld = 0.0;
};

/// Full training objective structural + beta * kld with the latent sampled
/// as z = mu + exp(logvar/2) * eps. Accumulates parameter gradients when
/// grads is non-null.
LossParts loss_and_gradient(const CircuitDag& dag, const ModelParams& params,
                            const nn::Vec& eps, double beta,
                            nn::GradStore* grads);

/// Convenience: encode, take z = mu, greedy-decode with the source gate
/// count as budget, and rebuild a circuit.
QuantumCircuit free_run_reconstruction(const ModelParams& params,
                                       const QuantumCircuit& circuit);

// --- checkpoints: manifest.json + one little-endian float32 blob per tensor ---
void save_checkpoint(const ModelParams& params, const std::string& dir);
ModelParams load_checkpoint(const std::string& dir);

}  // namespace qresynth
