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

#include "qresynth/train.hpp"

#include <numeric>

#include "qresynth/error.hpp"

namespace qresynth {

namespace {

void check_same_qubits(const std::vector<QuantumCircuit>& a,
                       const std::vector<QuantumCircuit>& b) {
  int n = -1;
  for (const auto* set : {&a, &b}) {
    for (const auto& c : *set) {
      if (n < 0) n = c.num_qubits;
      if (c.num_qubits != n) {
        throw MixedQubitCounts("training circuits must share a qubit count");
      }
    }
  }
}

double free_run_mse(const ModelParams& params, const QuantumCircuit& source,
                    const DensityMatrix& source_rho) {
  const QuantumCircuit recon = free_run_reconstruction(params, source);
  return density_mse(source_rho, density_matrix(simulate(recon)));
}

}  // namespace

TrainResult train(const std::vector<QuantumCircuit>& train_set,
                  const std::vector<QuantumCircuit>& val_set,
                  const TrainConfig& train_config,
                  const ModelConfig& model_config) {
  if (train_set.empty()) throw Error("training set is empty");
  if (train_config.epochs < 1 || train_config.batch_size < 1 ||
      train_config.learning_rate <= 0.0 || train_config.beta < 0.0 ||
      train_config.val_every < 1) {
    throw Error("train config fields must be positive");
  }
  check_same_qubits(train_set, val_set);
  validate_config(model_config);

  const auto& val_circuits = val_set.empty() ? train_set : val_set;

  std::vector<CircuitDag> train_dags;
  train_dags.reserve(train_set.size());
  for (const auto& c : train_set) train_dags.push_back(circuit_to_dag(c));
  std::vector<CircuitDag> val_dags;
  std::vector<DensityMatrix> val_rho;
  for (const auto& c : val_circuits) {
    val_dags.push_back(circuit_to_dag(c));
    val_rho.push_back(density_matrix(simulate(c)));
  }

  TrainResult result{
      make_params(train_config.variant, model_config,
                  derive_seed(train_config.seed, 0x9a7a)),
      {}};
  ModelParams& params = result.params;

  nn::GradStore grads(params.store);
  nn::AdamOptimizer adam(params.store.scalar_count(),
                         train_config.learning_rate);
  Rng rng(derive_seed(train_config.seed, 0x7a41));

  std::vector<int> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  const int latent = model_config.latent_dim;
  for (int epoch = 0; epoch < train_config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t cursor = 0;
    while (cursor < order.size()) {
      const std::size_t batch_end =
          std::min(cursor + static_cast<std::size_t>(train_config.batch_size),
                   order.size());
      grads.zero();
      for (std::size_t i = cursor; i < batch_end; ++i) {
        nn::Vec eps(latent);
        for (int d = 0; d < latent; ++d) eps[d] = rng.next_normal();
        const LossParts parts = loss_and_gradient(
            train_dags[static_cast<std::size_t>(order[i])], params, eps,
            train_config.beta, &grads);
        loss_sum += parts.total;
      }
      grads.scale(1.0 / static_cast<double>(batch_end - cursor));
      adam.step(params.store, grads);
      cursor = batch_end;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(train_set.size());

    const bool do_val = (epoch + 1) % train_config.val_every == 0 ||
                        epoch + 1 == train_config.epochs ||
                        train_config.early_stop_val_mse >= 0.0;
    if (do_val) {
      const nn::Vec zero_eps = nn::Vec::Zero(latent);
      double vloss = 0.0;
      double vmse = 0.0;
      for (std::size_t i = 0; i < val_dags.size(); ++i) {
        vloss += loss_and_gradient(val_dags[i], params, zero_eps,
                                   train_config.beta, nullptr)
                     .total;
        vmse += free_run_mse(params, val_circuits[i], val_rho[i]);
      }
      stats.val_loss = vloss / static_cast<double>(val_dags.size());
      stats.val_density_mse = vmse / static_cast<double>(val_dags.size());
    }
    result.history.push_back(stats);

    if (train_config.early_stop_val_mse >= 0.0 && do_val &&
        stats.val_density_mse < train_config.early_stop_val_mse) {
      break;
    }
  }
  return result;
}

}  // namespace qresynth
