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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "qresynth/error.hpp"
#include "qresynth/search.hpp"
#include "qresynth/train.hpp"

using namespace qresynth;

namespace {

ModelConfig tiny_config() {
  ModelConfig mc;
  mc.hidden_dim = 8;
  mc.latent_dim = 4;
  mc.gcn_rounds = 2;
  mc.edge_feature_dim = 4;
  return mc;
}

std::vector<QuantumCircuit> small_dataset(int count, int qubits, int gates,
                                          std::uint64_t seed) {
  std::vector<QuantumCircuit> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(random_circuit(qubits, gates, derive_seed(seed, i)));
  }
  return out;
}

}  // namespace

TEST_CASE("training is bitwise deterministic given the seed") {
  const auto data = small_dataset(4, 2, 6, 99);
  TrainConfig tc;
  tc.epochs = 3;
  tc.batch_size = 2;
  tc.seed = 42;
  tc.variant = ModelVariant::gru;

  const auto a = train(data, {}, tc, tiny_config());
  const auto b = train(data, {}, tc, tiny_config());
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].train_loss == b.history[i].train_loss);
    CHECK(a.history[i].val_density_mse == b.history[i].val_density_mse);
  }
  for (int id = 0; id < a.params.store.count(); ++id) {
    CHECK(a.params.store.value(id) == b.params.store.value(id));
  }

  TrainConfig tc2 = tc;
  tc2.seed = 43;
  const auto c = train(data, {}, tc2, tiny_config());
  CHECK(a.history.back().train_loss != c.history.back().train_loss);
}

TEST_CASE("train rejects mixed qubit counts and bad configs") {
  std::vector<QuantumCircuit> mixed{random_circuit(2, 4, 1),
                                    random_circuit(3, 4, 2)};
  TrainConfig tc;
  tc.epochs = 1;
  CHECK_THROWS_AS(train(mixed, {}, tc, tiny_config()), MixedQubitCounts);

  TrainConfig bad;
  bad.epochs = 0;
  CHECK_THROWS_AS(train(small_dataset(2, 2, 4, 3), {}, bad, tiny_config()),
                  Error);
}

TEST_CASE("training loss trends down and stays finite") {
  const auto data = small_dataset(6, 2, 8, 7);
  TrainConfig tc;
  tc.epochs = 30;
  tc.batch_size = 6;
  tc.seed = 11;
  tc.val_every = 30;
  ModelConfig mc = tiny_config();
  mc.hidden_dim = 16;
  mc.latent_dim = 8;
  const auto result = train(data, {}, tc, mc);
  REQUIRE(result.history.size() == 30);
  for (const auto& s : result.history) CHECK(std::isfinite(s.train_loss));
  const double first = result.history.front().train_loss;
  const double last = result.history.back().train_loss;
  CHECK(last < first);
}

TEST_CASE("memorization smoke test: one circuit reaches mse < 0.01") {
  const auto circuit = random_circuit(2, 8, 2024);
  TrainConfig tc;
  tc.epochs = 500;
  tc.batch_size = 1;
  tc.seed = 5;
  tc.variant = ModelVariant::gru;
  tc.early_stop_val_mse = 0.01;
  ModelConfig mc;
  mc.hidden_dim = 32;
  mc.latent_dim = 8;
  const auto result = train({circuit}, {}, tc, mc);
  CHECK(result.history.back().val_density_mse < 0.01);
  CHECK(result.history.size() <= 500);
}

TEST_CASE("reconstruct returns exactly n_enc * n_dec capped candidates") {
  const auto source = random_circuit(2, 10, 5);
  const auto params = make_params(ModelVariant::gru, tiny_config(), 3);
  const auto map = CouplingMap::line(2);
  Rng rng(17);
  const auto candidates = reconstruct(source, params, 3, 3, map, 1, rng);
  REQUIRE(candidates.size() == 9);
  for (const auto& c : candidates) {
    CHECK(c.circuit.num_qubits == source.num_qubits);
    CHECK(c.circuit.gates.size() <= source.gates.size());
    CHECK_NOTHROW(validate(c.circuit));
    CHECK(c.density_mse >= 0.0);
    // provenance covers the 3x3 grid
    CHECK(c.encoding_index >= 0);
    CHECK(c.encoding_index < 3);
    CHECK(c.decoding_index >= 0);
    CHECK(c.decoding_index < 3);
  }
  // candidate metrics recomputable from the stored circuit
  for (const auto& c : candidates) {
    const auto t = transpile(c.circuit, map, 1);
    CHECK(t.transpiled_gate_count == c.transpiled_gates);
    CHECK(t.depth == c.transpiled_depth);
    const double mse = density_mse(density_matrix(simulate(source)),
                                   density_matrix(simulate(c.circuit)));
    CHECK(mse == doctest::Approx(c.density_mse).epsilon(1e-12));
  }
}

TEST_CASE("perturb_search with zero noise and greedy decode repeats itself") {
  const auto source = random_circuit(3, 8, 21);
  const auto params = make_params(ModelVariant::gru, tiny_config(), 6);
  const auto map = CouplingMap::line(3);
  Rng rng(4);
  const auto candidates = perturb_search(source, params, 5, 0.0, map, 1,
                                         DecodeMode::greedy, rng);
  REQUIRE(candidates.size() == 5);
  for (const auto& c : candidates) CHECK(c.circuit == candidates[0].circuit);
}

TEST_CASE("perturb_search ranking is ascending in the stated key") {
  const auto source = random_circuit(2, 12, 33);
  const auto params = make_params(ModelVariant::gru, tiny_config(), 8);
  const auto map = CouplingMap::line(2);
  Rng rng(10);
  const auto ranked = perturb_search(source, params, 30, 1.0, map, 1,
                                     DecodeMode::sample, rng);
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    const auto key = [](const Candidate& c) {
      return std::tuple{static_cast<long long>(std::floor(c.density_mse / 1e-3)),
                        c.transpiled_gates, c.transpiled_depth};
    };
    CHECK(key(ranked[i - 1]) <= key(ranked[i]));
  }
}

TEST_CASE("select_best applies the tolerance and the ordering rule") {
  CHECK(!select_best({}, 0.5).has_value());

  Candidate a;
  a.density_mse = 0.001;
  a.transpiled_gates = 10;
  a.transpiled_depth = 6;
  Candidate b = a;
  b.transpiled_gates = 8;
  b.transpiled_depth = 9;
  Candidate c = a;
  c.transpiled_gates = 8;
  c.transpiled_depth = 5;
  Candidate fail = a;
  fail.density_mse = 0.9;
  fail.transpiled_gates = 1;

  const auto best = select_best({a, b, c, fail}, 0.01);
  REQUIRE(best.has_value());
  CHECK(best->transpiled_gates == 8);
  CHECK(best->transpiled_depth == 5);  // tie on gates broken by depth

  const auto only = select_best({a}, 0.01);
  REQUIRE(only.has_value());
  CHECK(only->transpiled_gates == 10);

  CHECK(!select_best({fail}, 0.01).has_value());
  // gate-count ceiling excludes otherwise-passing candidates
  CHECK(!select_best({a, b, c}, 0.01, 7).has_value());
}

TEST_CASE("reconstruct and perturb_search are deterministic given the seed") {
  const auto source = random_circuit(2, 10, 60);
  const auto params = make_params(ModelVariant::gru, tiny_config(), 14);
  const auto map = CouplingMap::line(2);
  Rng r1(5), r2(5);
  const auto a = reconstruct(source, params, 2, 2, map, 1, r1);
  const auto b = reconstruct(source, params, 2, 2, map, 1, r2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].circuit == b[i].circuit);
    CHECK(a[i].density_mse == b[i].density_mse);
  }
  Rng r3(6), r4(6);
  const auto p = perturb_search(source, params, 8, 0.4, map, 1,
                                DecodeMode::sample, r3);
  const auto q = perturb_search(source, params, 8, 0.4, map, 1,
                                DecodeMode::sample, r4);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i].circuit == q[i].circuit);
}

TEST_CASE("noise sweep diversity trend (advisory)") {
  // Distinct decoded circuits should not shrink as the perturbation scale
  // grows; advisory per the sweep's stochastic nature, so warn only.
  std::vector<QuantumCircuit> data;
  for (int i = 0; i < 10; ++i) data.push_back(random_circuit(2, 8, 700 + i));
  TrainConfig tc;
  tc.epochs = 40;
  tc.batch_size = 5;
  tc.seed = 3;
  tc.val_every = 40;
  ModelConfig mc;
  mc.hidden_dim = 16;
  mc.latent_dim = 8;
  const auto trained = train(data, {}, tc, mc);

  const auto map = CouplingMap::line(2);
  std::vector<std::size_t> diversity;
  Rng rng(9);
  for (double sigma : {0.1, 0.5, 1.0}) {
    const auto cands = perturb_search(data[0], trained.params, 50, sigma, map,
                                      1, DecodeMode::greedy, rng);
    std::set<std::string> distinct;
    for (const auto& c : cands) distinct.insert(circuit_to_text(c.circuit));
    diversity.push_back(distinct.size());
  }
  const bool monotone =
      diversity[0] <= diversity[1] && diversity[1] <= diversity[2];
  WARN_MESSAGE(monotone, "diversity not monotone in sigma: "
                             << diversity[0] << " " << diversity[1] << " "
                             << diversity[2]);
  CHECK(diversity[2] >= 1);
}

TEST_CASE("block partition: single block when the circuit fits") {
  const auto c = random_circuit(5, 20, 3);
  const auto blocks = block_partition(c, 5);
  REQUIRE(blocks.size() == 1);
  CHECK(reassemble_blocks(c.num_qubits, blocks) == c);
}

TEST_CASE("block partition round-trips on 8-qubit circuits (property)") {
  Rng seeds(888);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_circuit(8, 32, seeds.next_u64());
    const auto blocks = block_partition(c, 5);
    for (const auto& block : blocks) {
      CHECK(block.qubits.size() <= 5);
      CHECK(block.circuit.num_qubits == static_cast<int>(block.qubits.size()));
      CHECK_NOTHROW(validate(block.circuit));
    }
    CHECK(reassemble_blocks(c.num_qubits, blocks) == c);
  }
}

TEST_CASE("block partition rejects max_block_qubits < 2") {
  CHECK_THROWS_AS(block_partition(random_circuit(3, 4, 1), 1), Error);
}

TEST_CASE("block_optimize keeps the source when nothing passes") {
  const auto c = random_circuit(4, 12, 51);
  const auto params = make_params(ModelVariant::gru, tiny_config(), 77);
  std::map<int, const ModelParams*> by_size;
  for (int n = 1; n <= 5; ++n) by_size[n] = &params;

  BlockOptimizeConfig cfg;
  cfg.samples = 5;
  cfg.mse_tol = 0.0;  // untrained params essentially never hit mse == 0
  Rng rng(6);
  const auto out = block_optimize(c, by_size, cfg, rng);
  CHECK(out == c);
}

TEST_CASE("block_optimize demands params for every block size") {
  const auto c = random_circuit(4, 12, 52);
  std::map<int, const ModelParams*> empty;
  BlockOptimizeConfig cfg;
  cfg.samples = 2;
  Rng rng(6);
  CHECK_THROWS_AS(block_optimize(c, empty, cfg, rng), MissingCheckpoint);
}
