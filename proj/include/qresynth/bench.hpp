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
#include <string>
#include <vector>

#include "qresynth/circuit.hpp"
#include "qresynth/model.hpp"

namespace qresynth {

struct ExperimentConfig {
  std::vector<int> qubit_counts{2, 4, 6};
  std::vector<int> gate_counts{16, 24, 32};
  int circuits_per_size = 300;
  double train_fraction = 0.9;
  int runs_per_model = 3;
  std::vector<std::string> variants{"gru", "gcn", "deepgmg"};
  std::string map_spec = "line";
  int opt_level = 1;
  std::uint64_t seed = 7;

  // training
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double beta = 0.005;
  int val_every = 10;

  // model
  int hidden_dim = 128;
  int latent_dim = 32;
  int gcn_rounds = 3;
  bool bidirectional = true;
  int edge_feature_dim = 8;
  double temperature = 1.0;

  // evaluation / search
  int n_enc = 3;
  int n_dec = 3;
  double mse_tol = 0.01;
  double noise_scale = 0.5;
  int samples = 100;

  std::string out_dir = "out";
};

void validate_experiment(const ExperimentConfig& config);
ModelConfig model_config_of(const ExperimentConfig& config);

/// CSV row schema (header pinned):
/// variant,qubits,gates,run,circuit,candidate,gate_red_pct,depth_red_pct,density_mse
struct ResultRow {
  std::string variant;
  int qubits = 0;
  int gates = 0;
  int run = 0;
  int circuit = 0;
  int candidate = 0;
  double gate_red_pct = 0.0;
  double depth_red_pct = 0.0;
  double density_mse = 0.0;
};

extern const char* const kResultCsvHeader;
void write_rows_csv(const std::vector<ResultRow>& rows,
                    const std::string& path);
std::vector<ResultRow> read_rows_csv(const std::string& path);

// Dataset layout under <out>/data/q{N}g{G}/.
std::string size_dir(const ExperimentConfig& config, int qubits, int gates);
std::string circuit_path(const ExperimentConfig& config, int qubits, int gates,
                         int index);
struct SplitManifest {
  std::vector<int> train;
  std::vector<int> test;
};
SplitManifest load_split(const ExperimentConfig& config, int qubits,
                         int gates);
std::vector<QuantumCircuit> load_circuits(const ExperimentConfig& config,
                                          int qubits, int gates,
                                          const std::vector<int>& ids);

std::string checkpoint_dir(const ExperimentConfig& config,
                           const std::string& variant, int qubits, int gates,
                           int run);

/// Writes circuits_per_size seeded circuits per (qubits, gates) pair plus a
/// split manifest shared by all variants.
void cmd_generate(const ExperimentConfig& config);
/// Trains runs_per_model models per variant per size and saves checkpoints
/// plus per-epoch history CSVs.
void cmd_train(const ExperimentConfig& config);
/// Reconstruction metrics: n_enc x n_dec candidates per test circuit per
/// run, written to <out>/eval/rows.csv plus per-circuit search reports.
void cmd_eval(const ExperimentConfig& config);
/// Rule-based path only: reductions of peephole transpilation (opt 1)
/// against plain lowering (opt 0) on the test circuits.
void cmd_baseline(const ExperimentConfig& config);
/// Aggregates rows into summary CSVs and box-plot SVGs.
void cmd_report(const ExperimentConfig& config);

}  // namespace qresynth
