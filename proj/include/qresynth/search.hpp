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

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qresynth/model.hpp"
#include "qresynth/transpiler.hpp"

namespace qresynth {

struct Candidate {
  QuantumCircuit circuit;
  double density_mse = 0.0;
  int transpiled_gates = 0;
  int transpiled_depth = 0;
  // provenance
  int encoding_index = 0;
  int decoding_index = 0;
  double noise_scale = 0.0;
};

/// n_enc latent draws x n_dec sampled decodes, each capped at the source
/// gate count; candidate metrics are computed against the same map and opt
/// level used for the original.
std::vector<Candidate> reconstruct(const QuantumCircuit& source,
                                   const ModelParams& params, int n_enc,
                                   int n_dec, const CouplingMap& map,
                                   int opt_level, Rng& rng);

/// Decodes k perturbed latents z' = mu + noise_scale * eps and returns
/// candidates ranked ascending by (density-MSE bucket at 1e-3 resolution,
/// transpiled gates, transpiled depth).
std::vector<Candidate> perturb_search(const QuantumCircuit& source,
                                      const ModelParams& params, int k,
                                      double noise_scale,
                                      const CouplingMap& map, int opt_level,
                                      DecodeMode mode, Rng& rng);

/// Among candidates with density_mse <= mse_tol (and transpiled_gates <=
/// max_transpiled_gates when given), the minimum by (transpiled_gates,
/// transpiled_depth, provenance order); nullopt when none qualifies.
std::optional<Candidate> select_best(
    const std::vector<Candidate>& candidates, double mse_tol,
    int max_transpiled_gates = std::numeric_limits<int>::max());

struct CircuitBlock {
  std::vector<int> qubits;  // sorted original qubit indices
  QuantumCircuit circuit;   // on local qubits 0..qubits.size()-1
};

/// Greedy left-to-right slicing: a block accumulates consecutive gates while
/// the union of their operands stays within max_block_qubits. Reassembling
/// the blocks in order reproduces the source exactly.
std::vector<CircuitBlock> block_partition(const QuantumCircuit& circuit,
                                          int max_block_qubits = 5);

QuantumCircuit reassemble_blocks(int num_qubits,
                                 const std::vector<CircuitBlock>& blocks);

struct BlockOptimizeConfig {
  int samples = 100;
  double noise_scale = 0.5;
  double mse_tol = 0.01;
  std::string map_spec = "line";
  int opt_level = 1;
  int max_block_qubits = 5;
  DecodeMode mode = DecodeMode::greedy;
};

/// Runs perturb_search + select_best per block; blocks with no passing
/// candidate stay unchanged. params_by_size maps block qubit counts to
/// trained parameters (throws MissingCheckpoint when a size is absent).
QuantumCircuit block_optimize(
    const QuantumCircuit& circuit,
    const std::map<int, const ModelParams*>& params_by_size,
    const BlockOptimizeConfig& config, Rng& rng);

}  // namespace qresynth
