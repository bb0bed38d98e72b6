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

#include "qresynth/search.hpp"

#include <algorithm>
#include <cmath>

#include "qresynth/error.hpp"

namespace qresynth {

namespace {

Candidate make_candidate(QuantumCircuit circuit, const DensityMatrix& source_rho,
                         const CouplingMap& map, int opt_level, int enc_index,
                         int dec_index, double noise_scale) {
  Candidate cand;
  cand.density_mse = density_mse(source_rho, density_matrix(simulate(circuit)));
  const TranspiledCircuit t = transpile(circuit, map, opt_level);
  cand.transpiled_gates = t.transpiled_gate_count;
  cand.transpiled_depth = t.depth;
  cand.encoding_index = enc_index;
  cand.decoding_index = dec_index;
  cand.noise_scale = noise_scale;
  cand.circuit = std::move(circuit);
  return cand;
}

}  // namespace

std::vector<Candidate> reconstruct(const QuantumCircuit& source,
                                   const ModelParams& params, int n_enc,
                                   int n_dec, const CouplingMap& map,
                                   int opt_level, Rng& rng) {
  validate(source);
  const CircuitDag dag = circuit_to_dag(source);
  const Encoding enc = encode(params, dag);
  const DensityMatrix source_rho = density_matrix(simulate(source));
  const int budget = static_cast<int>(source.gates.size());

  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(n_enc * n_dec));
  for (int e = 0; e < n_enc; ++e) {
    const nn::Vec z = reparameterize(enc.mu, enc.logvar, rng);
    for (int d = 0; d < n_dec; ++d) {
      const CircuitDag decoded = decode(z, params, source.num_qubits, budget,
                                        DecodeMode::sample, &rng);
      out.push_back(make_candidate(dag_to_circuit(decoded), source_rho, map,
                                   opt_level, e, d, 0.0));
    }
  }
  return out;
}

std::vector<Candidate> perturb_search(const QuantumCircuit& source,
                                      const ModelParams& params, int k,
                                      double noise_scale,
                                      const CouplingMap& map, int opt_level,
                                      DecodeMode mode, Rng& rng) {
  validate(source);
  if (k < 1) throw Error("perturb_search needs k >= 1");
  const CircuitDag dag = circuit_to_dag(source);
  const Encoding enc = encode(params, dag);
  const DensityMatrix source_rho = density_matrix(simulate(source));
  const int budget = static_cast<int>(source.gates.size());

  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    nn::Vec z = enc.mu;
    for (std::int64_t d = 0; d < z.size(); ++d) {
      z[d] += noise_scale * rng.next_normal();
    }
    const CircuitDag decoded =
        decode(z, params, source.num_qubits, budget, mode,
               mode == DecodeMode::sample ? &rng : nullptr);
    out.push_back(make_candidate(dag_to_circuit(decoded), source_rho, map,
                                 opt_level, i, 0, noise_scale));
  }

  std::stable_sort(out.begin(), out.end(), [](const Candidate& a,
                                              const Candidate& b) {
    const auto bucket = [](double mse) {
      return static_cast<long long>(std::floor(mse / 1e-3));
    };
    const auto key_a = std::tuple{bucket(a.density_mse), a.transpiled_gates,
                                  a.transpiled_depth};
    const auto key_b = std::tuple{bucket(b.density_mse), b.transpiled_gates,
                                  b.transpiled_depth};
    return key_a < key_b;
  });
  return out;
}

std::optional<Candidate> select_best(const std::vector<Candidate>& candidates,
                                     double mse_tol,
                                     int max_transpiled_gates) {
  std::optional<Candidate> best;
  for (const auto& c : candidates) {
    if (c.density_mse > mse_tol) continue;
    if (c.transpiled_gates > max_transpiled_gates) continue;
    if (!best || std::tuple{c.transpiled_gates, c.transpiled_depth} <
                     std::tuple{best->transpiled_gates, best->transpiled_depth}) {
      best = c;
    }
  }
  return best;
}

std::vector<CircuitBlock> block_partition(const QuantumCircuit& circuit,
                                          int max_block_qubits) {
  validate(circuit);
  if (max_block_qubits < 2) {
    throw Error("block partition needs max_block_qubits >= 2");
  }

  std::vector<CircuitBlock> blocks;
  std::vector<int> support;  // sorted original qubits of the open block
  std::vector<GateApplication> pending;

  auto close_block = [&] {
    if (pending.empty()) return;
    CircuitBlock block;
    block.qubits = support;
    block.circuit.num_qubits = static_cast<int>(support.size());
    for (const auto& g : pending) {
      GateApplication local{g.kind, {}};
      for (int q : g.qubits) {
        const auto it = std::lower_bound(support.begin(), support.end(), q);
        local.qubits.push_back(static_cast<int>(it - support.begin()));
      }
      block.circuit.gates.push_back(std::move(local));
    }
    blocks.push_back(std::move(block));
    support.clear();
    pending.clear();
  };

  for (const auto& g : circuit.gates) {
    std::vector<int> merged = support;
    for (int q : g.qubits) {
      const auto it = std::lower_bound(merged.begin(), merged.end(), q);
      if (it == merged.end() || *it != q) merged.insert(it, q);
    }
    if (static_cast<int>(merged.size()) > max_block_qubits) {
      close_block();
      merged.assign(g.qubits.begin(), g.qubits.end());
      std::sort(merged.begin(), merged.end());
    }
    support = std::move(merged);
    pending.push_back(g);
  }
  close_block();
  return blocks;
}

QuantumCircuit reassemble_blocks(int num_qubits,
                                 const std::vector<CircuitBlock>& blocks) {
  QuantumCircuit out;
  out.num_qubits = num_qubits;
  for (const auto& block : blocks) {
    for (const auto& g : block.circuit.gates) {
      GateApplication placed{g.kind, {}};
      for (int local : g.qubits) {
        placed.qubits.push_back(block.qubits[static_cast<std::size_t>(local)]);
      }
      out.gates.push_back(std::move(placed));
    }
  }
  validate(out);
  return out;
}

QuantumCircuit block_optimize(
    const QuantumCircuit& circuit,
    const std::map<int, const ModelParams*>& params_by_size,
    const BlockOptimizeConfig& config, Rng& rng) {
  auto blocks = block_partition(circuit, config.max_block_qubits);
  for (auto& block : blocks) {
    const int n = block.circuit.num_qubits;
    if (block.circuit.gates.empty()) continue;
    const auto it = params_by_size.find(n);
    if (it == params_by_size.end() || it->second == nullptr) {
      throw MissingCheckpoint("no trained parameters for block size " +
                              std::to_string(n));
    }
    const CouplingMap map = CouplingMap::from_spec(config.map_spec, n);
    const TranspiledCircuit source_t =
        transpile(block.circuit, map, config.opt_level);
    const auto candidates =
        perturb_search(block.circuit, *it->second, config.samples,
                       config.noise_scale, map, config.opt_level, config.mode,
                       rng);
    const auto best = select_best(candidates, config.mse_tol,
                                  source_t.transpiled_gate_count);
    if (best) block.circuit = best->circuit;
  }
  return reassemble_blocks(circuit.num_qubits, blocks);
}

}  // namespace qresynth
