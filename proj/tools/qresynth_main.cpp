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

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qresynth/bench.hpp"
#include "qresynth/error.hpp"
#include "qresynth/search.hpp"
#include "qresynth/transpiler.hpp"

namespace {

using qresynth::ExperimentConfig;

struct OptimizeArgs {
  std::string circuit_file;
  std::string checkpoint;
  std::string out_file;
  std::string mode = "greedy";
  int max_block_qubits = 5;
};

int run_optimize(const ExperimentConfig& cfg, const OptimizeArgs& args) {
  const auto circuit = qresynth::load_circuit_text(args.circuit_file);
  const auto params = qresynth::load_checkpoint(args.checkpoint);

  qresynth::BlockOptimizeConfig bc;
  bc.samples = cfg.samples;
  bc.noise_scale = cfg.noise_scale;
  bc.mse_tol = cfg.mse_tol;
  bc.map_spec = cfg.map_spec;
  bc.opt_level = cfg.opt_level;
  bc.max_block_qubits = args.max_block_qubits;
  bc.mode = args.mode == "sample" ? qresynth::DecodeMode::sample
                                  : qresynth::DecodeMode::greedy;

  std::map<int, const qresynth::ModelParams*> by_size;
  for (int n = 1; n <= bc.max_block_qubits; ++n) by_size[n] = &params;

  qresynth::Rng rng(qresynth::derive_seed(cfg.seed, 0x0b71));
  const auto optimized = qresynth::block_optimize(circuit, by_size, bc, rng);

  const auto map =
      qresynth::CouplingMap::from_spec(cfg.map_spec, circuit.num_qubits);
  const auto before = qresynth::transpile(circuit, map, cfg.opt_level);
  const auto after = qresynth::transpile(optimized, map, cfg.opt_level);
  const double mse = qresynth::density_mse(
      qresynth::density_matrix(qresynth::simulate(circuit)),
      qresynth::density_matrix(qresynth::simulate(optimized)));

  std::cout << "source:    " << before.transpiled_gate_count
            << " gates, depth " << before.depth << "\n";
  std::cout << "optimized: " << after.transpiled_gate_count << " gates, depth "
            << after.depth << "\n";
  if (before.transpiled_gate_count > 0) {
    std::cout << "gate reduction: "
              << qresynth::reduction_pct(before.transpiled_gate_count,
                                         after.transpiled_gate_count)
              << "%\n";
  }
  std::cout << "density mse vs source: " << mse << "\n";

  if (!args.out_file.empty()) {
    qresynth::save_circuit_text(optimized, args.out_file);
    std::cout << "wrote " << args.out_file << "\n";
  } else {
    std::cout << qresynth::circuit_to_text(optimized);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generative-graph-model toolkit for quantum circuit resynthesis"};
  app.fallthrough();
  app.set_config("--config", "", "INI/TOML key-value config file");

  ExperimentConfig cfg;
  std::string variant_override;

  app.add_option("--out", cfg.out_dir, "Output directory")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Experiment seed")->capture_default_str();
  app.add_option("--variant", variant_override,
                 "Restrict to one model variant")
      ->check(CLI::IsMember({"gru", "gcn", "deepgmg"}));
  app.add_option("--map", cfg.map_spec,
                 "Coupling map: line[-N], ring[-N], full[-N], hex-12, @file")
      ->capture_default_str();
  app.add_option("--opt", cfg.opt_level, "Optimization level (0 or 1)")
      ->capture_default_str();
  app.add_option("--mse-tol", cfg.mse_tol, "Density-MSE equivalence tolerance")
      ->capture_default_str();
  app.add_option("--noise", cfg.noise_scale, "Latent perturbation scale")
      ->capture_default_str();
  app.add_option("--samples", cfg.samples, "Perturbation samples per circuit")
      ->capture_default_str();
  app.add_option("--qubit-counts", cfg.qubit_counts, "Dataset qubit counts")
      ->capture_default_str();
  app.add_option("--gate-counts", cfg.gate_counts, "Dataset gate counts")
      ->capture_default_str();
  app.add_option("--circuits-per-size", cfg.circuits_per_size,
                 "Circuits per (qubits, gates) pair")
      ->capture_default_str();
  app.add_option("--train-fraction", cfg.train_fraction, "Train split fraction")
      ->capture_default_str();
  app.add_option("--runs", cfg.runs_per_model, "Training runs per model")
      ->capture_default_str();
  app.add_option("--epochs", cfg.epochs, "Training epochs")
      ->capture_default_str();
  app.add_option("--batch-size", cfg.batch_size, "Minibatch size")
      ->capture_default_str();
  app.add_option("--lr", cfg.learning_rate, "Learning rate")
      ->capture_default_str();
  app.add_option("--beta", cfg.beta, "KLD weight")->capture_default_str();
  app.add_option("--val-every", cfg.val_every, "Validation cadence in epochs")
      ->capture_default_str();
  app.add_option("--hidden-dim", cfg.hidden_dim, "Hidden state width")
      ->capture_default_str();
  app.add_option("--latent-dim", cfg.latent_dim, "Latent width")
      ->capture_default_str();
  app.add_option("--gcn-rounds", cfg.gcn_rounds, "Message-passing rounds")
      ->capture_default_str();
  app.add_option("--bidirectional", cfg.bidirectional,
                 "Bidirectional GRU encoding")
      ->capture_default_str();
  app.add_option("--edge-feature-dim", cfg.edge_feature_dim,
                 "Edge feature width (deepgmg)")
      ->capture_default_str();
  app.add_option("--temperature", cfg.temperature, "Sampling temperature")
      ->capture_default_str();
  app.add_option("--n-enc", cfg.n_enc, "Encodings per circuit in eval")
      ->capture_default_str();
  app.add_option("--n-dec", cfg.n_dec, "Decodings per encoding in eval")
      ->capture_default_str();

  auto* generate = app.add_subcommand("generate", "Write the random-circuit dataset");
  auto* train = app.add_subcommand("train", "Train models on the dataset");
  auto* eval = app.add_subcommand("eval", "Score reconstructions of test circuits");
  auto* baseline = app.add_subcommand("baseline", "Rule-based reduction rows");
  auto* report = app.add_subcommand("report", "Aggregate rows into summaries and plots");

  OptimizeArgs opt_args;
  auto* optimize =
      app.add_subcommand("optimize", "Search alternates for one circuit");
  optimize->add_option("circuit", opt_args.circuit_file, "Circuit text file")
      ->required();
  optimize->add_option("--ckpt", opt_args.checkpoint, "Checkpoint directory")
      ->required();
  optimize->add_option("--out-file", opt_args.out_file,
                       "Write the optimized circuit here");
  optimize->add_option("--mode", opt_args.mode, "Decode mode")
      ->check(CLI::IsMember({"greedy", "sample"}));
  optimize->add_option("--max-block-qubits", opt_args.max_block_qubits,
                       "Block size cap for large circuits")
      ->capture_default_str();

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (!variant_override.empty()) cfg.variants = {variant_override};

  try {
    if (generate->parsed()) qresynth::cmd_generate(cfg);
    if (train->parsed()) qresynth::cmd_train(cfg);
    if (eval->parsed()) qresynth::cmd_eval(cfg);
    if (baseline->parsed()) qresynth::cmd_baseline(cfg);
    if (report->parsed()) qresynth::cmd_report(cfg);
    if (optimize->parsed()) return run_optimize(cfg, opt_args);
  } catch (const qresynth::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
