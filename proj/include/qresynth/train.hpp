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
#include <vector>

#include "qresynth/model.hpp"

namespace qresynth {

struct TrainConfig {
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double beta = 0.005;  // KLD weight
  std::uint64_t seed = 0;
  ModelVariant variant = ModelVariant::gru;
  /// Validation metrics computed every val_every epochs (and on the last).
  int val_every = 1;
  /// Stop once the free-run validation density MSE drops below this;
  /// negative disables.
  double early_stop_val_mse = -1.0;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  /// Mean zero-noise loss on the validation set; -1 when not computed.
  double val_loss = -1.0;
  /// Mean free-run reconstruction density MSE on the validation set; -1
  /// when not computed this epoch.
  double val_density_mse = -1.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochStats> history;
};

/// Minimizes mean(structural_loss + beta * kld) with adaptive-moment
/// gradient descent. All circuits must share one qubit count (throws
/// MixedQubitCounts). Bitwise deterministic for a given config.
/// An empty validation set falls back to the training set for metrics.
TrainResult train(const std::vector<QuantumCircuit>& train_set,
                  const std::vector<QuantumCircuit>& val_set,
                  const TrainConfig& train_config,
                  const ModelConfig& model_config);

}  // namespace qresynth
