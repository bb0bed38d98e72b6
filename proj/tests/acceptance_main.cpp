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

// Acceptance suite: one self-contained check per release criterion, each
// printing a single PASS/FAIL line. Returns the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qresynth/bench.hpp"
#include "qresynth/report.hpp"
#include "qresynth/search.hpp"
#include "qresynth/train.hpp"
#include "qresynth/transpiler.hpp"

using namespace qresynth;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// 1. All 22 gate matrices satisfy U U^dag = I within 1e-12.
void criterion_unitarity(Check& c) {
  for (int k = 0; k < kGateKindCount; ++k) {
    const auto kind = static_cast<GateKind>(k);
    const auto& u = gate_unitary(kind);
    const double defect =
        (u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
            .cwiseAbs()
            .maxCoeff();
    c.expect(defect < 1e-12,
             std::string(gate_name(kind)) + " unitarity defect " +
                 std::to_string(defect));
  }
}

// 2. simulate matches circuit_unitary * |0...0> on 100 random circuits, N<=3.
void criterion_simulator_oracle(Check& c) {
  Rng seeds(0xACC2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(seeds.next_below(3));
    const int g = 1 + static_cast<int>(seeds.next_below(32));
    const auto circuit = random_circuit(n, g, seeds.next_u64());
    const auto s = simulate(circuit);
    const Eigen::VectorXcd expected = circuit_unitary(circuit).col(0);
    const double err = (s.amps - expected).cwiseAbs().maxCoeff();
    c.expect(err < 1e-10, "statevector deviates by " + std::to_string(err));
  }
}

// 3. Transpile equivalence over line and hex maps; swaps lower to 3 cx.
void criterion_transpile_equivalence(Check& c) {
  const auto sw = decompose_2q(GateKind::swap);
  c.expect(sw.size() == 3, "swap decomposition length");
  for (const auto& g : sw) c.expect(g.kind == GateKind::cx, "swap uses non-cx");

  QuantumCircuit one_swap;
  one_swap.num_qubits = 2;
  one_swap.append(GateKind::swap, {0, 1});
  const auto t_swap = transpile(one_swap, CouplingMap::line(2), 0);
  c.expect(t_swap.transpiled_gate_count == 3, "adjacent swap is not 3 cx");

  QuantumCircuit far_cx;
  far_cx.num_qubits = 3;
  far_cx.append(GateKind::cx, {0, 2});
  const auto t_far = transpile(far_cx, CouplingMap::line(3), 0);
  c.expect(t_far.transpiled_gate_count == 4,
           "one routed swap should add exactly 3 cx");

  Rng seeds(0xACC3);
  const auto hex = CouplingMap::hex12();
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(seeds.next_below(5));
    const int g = 16 + static_cast<int>(seeds.next_below(17));
    const auto circuit = random_circuit(n, g, seeds.next_u64());
    const auto rho = density_matrix(simulate(circuit));
    const int opt = static_cast<int>(seeds.next_below(2));
    const auto t_line = transpile(circuit, CouplingMap::line(n), opt);
    const double mse_line =
        density_mse(rho, transpiled_logical_density(t_line, n));
    c.expect(mse_line < 1e-9, "line-map mse " + std::to_string(mse_line));
    const auto t_hex = transpile(circuit, hex, opt);
    const double mse_hex =
        density_mse(rho, transpiled_logical_density(t_hex, n));
    c.expect(mse_hex < 1e-9, "hex-map mse " + std::to_string(mse_hex));
  }
}

// 4. 1000 decodes from random z and random params are all valid DAGs.
void criterion_decoder_totality(Check& c) {
  Rng rng(0xACC4);
  ModelConfig mc;
  mc.hidden_dim = 8;
  mc.latent_dim = 4;
  mc.edge_feature_dim = 4;
  const int qubit_counts[] = {1, 2, 4, 6};
  const int budgets[] = {0, 16, 32};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto variant = static_cast<ModelVariant>(rng.next_below(3));
    const auto params = make_params(variant, mc, rng.next_u64());
    const int n = qubit_counts[rng.next_below(4)];
    const int budget = budgets[rng.next_below(3)];
    nn::Vec z(mc.latent_dim);
    for (int i = 0; i < mc.latent_dim; ++i) z[i] = 2.0 * rng.next_normal();
    const auto mode =
        rng.next_below(2) == 0 ? DecodeMode::greedy : DecodeMode::sample;
    try {
      const auto dag = decode(z, params, n, budget, mode, &rng);
      validate_dag(dag);
      int gates = 0, end_in = 0, start_out = 0;
      for (const auto& node : dag.nodes) {
        gates += node.type == DagNodeType::gate ? 1 : 0;
      }
      for (const auto& e : dag.edges) {
        start_out += e.src == 0 ? 1 : 0;
        end_in += e.dst == static_cast<int>(dag.nodes.size()) - 1 ? 1 : 0;
      }
      c.expect(start_out == n, "start out-degree mismatch");
      c.expect(end_in == n, "end in-degree mismatch");
      c.expect(gates <= budget, "gate budget exceeded");
      dag_to_circuit(dag);
    } catch (const std::exception& e) {
      c.expect(false, std::string("decode produced an invalid DAG: ") + e.what());
    }
  }
}

// 5. Analytic vs central-difference gradients at hidden_dim 8, 10 instances.
void criterion_gradients(Check& c) {
  Rng rng(0xACC5);
  const ModelVariant variants[10] = {
      ModelVariant::gru,     ModelVariant::gru,  ModelVariant::gru,
      ModelVariant::gru,     ModelVariant::gcn,  ModelVariant::gcn,
      ModelVariant::gcn,     ModelVariant::deepgmg, ModelVariant::deepgmg,
      ModelVariant::deepgmg};
  for (int inst = 0; inst < 10; ++inst) {
    ModelConfig mc;
    mc.hidden_dim = 8;
    mc.latent_dim = 4;
    mc.gcn_rounds = 2;
    mc.edge_feature_dim = 4;
    if (variants[inst] == ModelVariant::gru) mc.bidirectional = inst % 2 == 0;
    auto params = make_params(variants[inst], mc, rng.next_u64());
    const int n = 1 + static_cast<int>(rng.next_below(3));
    const auto dag =
        circuit_to_dag(random_circuit(n, 3 + rng.next_below(4), rng.next_u64()));
    nn::Vec eps(mc.latent_dim);
    for (int i = 0; i < mc.latent_dim; ++i) eps[i] = rng.next_normal();

    nn::GradStore grads(params.store);
    loss_and_gradient(dag, params, eps, 1.0, &grads);

    const double h = 1e-5;
    double diff_sq = 0.0, num_sq = 0.0, ana_sq = 0.0;
    for (std::size_t i = 0; i < params.store.scalar_count(); ++i) {
      params.store.add_flat(i, h);
      const double up = loss_and_gradient(dag, params, eps, 1.0, nullptr).total;
      params.store.add_flat(i, -2.0 * h);
      const double dn = loss_and_gradient(dag, params, eps, 1.0, nullptr).total;
      params.store.add_flat(i, h);
      const double numeric = (up - dn) / (2.0 * h);
      const double analytic = grads.get_flat(i);
      diff_sq += (numeric - analytic) * (numeric - analytic);
      num_sq += numeric * numeric;
      ana_sq += analytic * analytic;
    }
    const double rel =
        std::sqrt(diff_sq) / std::max(std::sqrt(std::max(num_sq, ana_sq)), 1e-12);
    c.expect(rel < 1e-4, "instance " + std::to_string(inst) +
                             " relative gradient error " + std::to_string(rel));
  }
}

// 6. Memorizing one 2-qubit 8-gate circuit reaches free-run MSE < 0.01.
void criterion_memorization(Check& c) {
  const auto circuit = random_circuit(2, 8, 4);
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
  const double mse = result.history.back().val_density_mse;
  c.expect(mse < 0.01, "free-run reconstruction mse " + std::to_string(mse));
}

// 7. Desk-scale trend: 100 2-qubit/16-gate circuits, 90/10 split, GRU;
//    mean test free-run MSE < 0.15 and perturb_search finds a candidate with
//    transpiled gates <= original on >= 40% of test circuits. 3 seeds, pass
//    when at least 2 succeed.
void criterion_trend(Check& c) {
  int seeds_passed = 0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    std::vector<QuantumCircuit> all;
    for (int i = 0; i < 100; ++i) {
      all.push_back(random_circuit(2, 16, derive_seed(seed, 0xc7, i)));
    }
    const std::vector<QuantumCircuit> train_set(all.begin(), all.begin() + 90);
    const std::vector<QuantumCircuit> test_set(all.begin() + 90, all.end());

    TrainConfig tc;
    tc.epochs = 300;
    tc.batch_size = 16;
    tc.seed = seed;
    tc.variant = ModelVariant::gru;
    tc.val_every = 300;
    ModelConfig mc;
    mc.hidden_dim = 64;
    mc.latent_dim = 16;
    const auto result = train(train_set, test_set, tc, mc);
    const double test_mse = result.history.back().val_density_mse;

    const auto map = CouplingMap::line(2);
    Rng rng(derive_seed(seed, 0x5ea7c4));
    int hits = 0;
    for (const auto& source : test_set) {
      const auto source_t = transpile(source, map, 1);
      const auto candidates = perturb_search(source, result.params, 100, 0.5,
                                             map, 1, DecodeMode::greedy, rng);
      const auto best =
          select_best(candidates, 0.05, source_t.transpiled_gate_count);
      hits += best.has_value() ? 1 : 0;
    }
    const bool seed_ok = test_mse < 0.15 && hits >= 4;
    seeds_passed += seed_ok ? 1 : 0;
    per_seed += " seed" + std::to_string(seed) + "(mse=" +
                std::to_string(test_mse) + ", hits=" + std::to_string(hits) +
                "/10" + (seed_ok ? " ok)" : " fail)");
  }
  c.expect(seeds_passed >= 2, "only " + std::to_string(seeds_passed) +
                                  "/3 seeds passed:" + per_seed);
  c.detail = per_seed;
}

// 8. Metric arithmetic: reduction_pct spot checks and exact aggregation.
void criterion_metrics(Check& c) {
  const double r = reduction_pct(95, 60);
  c.expect(std::abs(r - 36.84) < 0.005, "reduction_pct(95,60) = " + std::to_string(r));
  c.expect(reduction_pct(50, 50) == 0.0, "reduction_pct(50,50) nonzero");
  c.expect(reduction_pct(100, 173) == -73.0, "reduction_pct(100,173) wrong");

  // Hand-recomputed CSV average must match the summary exactly.
  std::vector<ResultRow> rows;
  Rng rng(0xACC8);
  for (int q : {2, 4, 6}) {
    for (int i = 0; i < 7; ++i) {
      ResultRow row;
      row.variant = "gru";
      row.qubits = q;
      row.gates = 16;
      row.gate_red_pct = rng.next_uniform(-80.0, 80.0);
      row.depth_red_pct = rng.next_uniform(-80.0, 80.0);
      row.density_mse = rng.next_double();
      rows.push_back(row);
    }
  }
  const auto tmp = fs::temp_directory_path() / "qresynth_acc8.csv";
  write_rows_csv(rows, tmp.string());
  const auto back = read_rows_csv(tmp.string());
  fs::remove(tmp);
  c.expect(back.size() == rows.size(), "csv row count changed");

  double hand = 0.0;
  for (const auto& row : back) hand += row.gate_red_pct;
  hand /= static_cast<double>(back.size());
  const auto summary = summarize_by_variant(back);
  c.expect(summary.size() == 1 && summary[0].gate_mean == hand,
           "summary mean differs from the hand-recomputed CSV mean");

  // mean of per-size means, weighted by group size, equals the grand mean
  const auto by_size = summarize_by_size(back);
  double weighted = 0.0;
  std::size_t n_total = 0;
  for (const auto& s : by_size) {
    weighted += s.gate_mean * static_cast<double>(s.n);
    n_total += s.n;
  }
  weighted /= static_cast<double>(n_total);
  c.expect(std::abs(weighted - hand) < 1e-12, "weighted means diverge");
}

// 9. generate -> train -> eval -> report twice is byte-identical.
void criterion_determinism(Check& c) {
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  std::map<fs::path, std::map<std::string, std::string>> snapshots;
  std::vector<fs::path> roots;
  for (int round = 0; round < 2; ++round) {
    const fs::path root = fs::temp_directory_path() /
                          ("qresynth_acc9_" + std::to_string(round));
    fs::remove_all(root);
    roots.push_back(root);
    ExperimentConfig cfg;
    cfg.qubit_counts = {2};
    cfg.gate_counts = {16};
    cfg.circuits_per_size = 20;
    cfg.runs_per_model = 1;
    cfg.variants = {"gru"};
    cfg.epochs = 20;
    cfg.batch_size = 8;
    cfg.hidden_dim = 16;
    cfg.latent_dim = 8;
    cfg.val_every = 20;
    cfg.seed = 11;
    cfg.out_dir = (root / "out").string();
    cmd_generate(cfg);
    cmd_train(cfg);
    cmd_eval(cfg);
    cmd_baseline(cfg);
    cmd_report(cfg);

    auto& snap = snapshots[root];
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (entry.is_regular_file()) {
        snap[fs::relative(entry.path(), root).string()] = slurp(entry.path());
      }
    }
  }
  const auto& a = snapshots[roots[0]];
  const auto& b = snapshots[roots[1]];
  c.expect(!a.empty(), "pipeline produced no files");
  c.expect(a.size() == b.size(), "file sets differ between runs");
  for (const auto& [name, content] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != content) {
      c.expect(false, "file differs between runs: " + name);
      break;
    }
  }
  for (const auto& root : roots) fs::remove_all(root);
}

// 10. Block partition/reassembly identity on 100 random 8-qubit circuits.
void criterion_blocks(Check& c) {
  Rng seeds(0xACC10);
  for (int trial = 0; trial < 100; ++trial) {
    const auto circuit = random_circuit(8, 32, seeds.next_u64());
    const auto blocks = block_partition(circuit, 5);
    for (const auto& block : blocks) {
      c.expect(block.qubits.size() <= 5, "block wider than 5 qubits");
    }
    c.expect(reassemble_blocks(circuit.num_qubits, blocks) == circuit,
             "reassembly is not the identity");
  }
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "unitarity of all 22 gate matrices (1e-12)", criterion_unitarity},
      {2, "simulator matches brute-force unitary oracle (N<=3, 1e-10)",
       criterion_simulator_oracle},
      {3, "transpile equivalence on line/hex maps; 3 cx per swap",
       criterion_transpile_equivalence},
      {4, "decoder totality: 1000/1000 valid DAGs", criterion_decoder_totality},
      {5, "analytic gradients match central differences (rel 1e-4)",
       criterion_gradients},
      {6, "memorization: free-run density MSE < 0.01", criterion_memorization},
      {7, "desk-scale trend: test MSE < 0.15 and >=40% search hits (2/3 seeds)",
       criterion_trend},
      {8, "metric arithmetic and exact aggregation", criterion_metrics},
      {9, "pipeline determinism: byte-identical reruns", criterion_determinism},
      {10, "block partition round-trip on 8-qubit circuits", criterion_blocks},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (check.ok) {
      std::printf("[PASS] criterion %2d: %s (%.1fs)%s\n", criterion.number,
                  criterion.name, secs,
                  check.detail.empty() ? "" : (" --" + check.detail).c_str());
    } else {
      std::printf("[FAIL] criterion %2d: %s (%.1fs) -- %s\n", criterion.number,
                  criterion.name, secs, check.detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("acceptance: %d criteria FAILED\n", failures);
  }
  return failures;
}
