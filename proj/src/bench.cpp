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

#include "qresynth/bench.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qresynth/error.hpp"
#include "qresynth/search.hpp"
#include "qresynth/train.hpp"
#include "qresynth/transpiler.hpp"

namespace qresynth {

namespace fs = std::filesystem;

const char* const kResultCsvHeader =
    "variant,qubits,gates,run,circuit,candidate,gate_red_pct,depth_red_pct,"
    "density_mse";

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string zero_pad(int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*d", width, value);
  return buf;
}

std::uint64_t variant_tag(const std::string& v) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : v) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

CouplingMap map_for(const ExperimentConfig& config, int qubits) {
  return CouplingMap::from_spec(config.map_spec, qubits);
}

}  // namespace

void validate_experiment(const ExperimentConfig& config) {
  if (config.qubit_counts.empty() || config.gate_counts.empty()) {
    throw Error("experiment needs qubit and gate counts");
  }
  for (int q : config.qubit_counts) {
    if (q < 1 || q > kMaxSimQubits) throw Error("qubit count out of range");
  }
  for (int g : config.gate_counts) {
    if (g < 0) throw Error("gate count must be >= 0");
  }
  if (config.circuits_per_size < 1) throw Error("circuits_per_size must be >= 1");
  if (config.train_fraction <= 0.0 || config.train_fraction >= 1.0) {
    throw Error("train_fraction must lie in (0, 1)");
  }
  if (config.runs_per_model < 1) throw Error("runs_per_model must be >= 1");
  if (config.variants.empty()) throw Error("no model variants configured");
  for (const auto& v : config.variants) {
    if (!variant_from_name(v)) throw Error("unknown variant: " + v);
  }
  if (config.opt_level != 0 && config.opt_level != 1) {
    throw Error("opt level must be 0 or 1");
  }
  if (config.n_enc < 1 || config.n_dec < 1 || config.samples < 1) {
    throw Error("search sample counts must be >= 1");
  }
  if (config.mse_tol < 0.0 || config.noise_scale < 0.0) {
    throw Error("tolerances must be >= 0");
  }
  validate_config(model_config_of(config));
}

ModelConfig model_config_of(const ExperimentConfig& config) {
  ModelConfig mc;
  mc.hidden_dim = config.hidden_dim;
  mc.latent_dim = config.latent_dim;
  mc.gcn_rounds = config.gcn_rounds;
  mc.bidirectional = config.bidirectional;
  mc.edge_feature_dim = config.edge_feature_dim;
  mc.temperature = config.temperature;
  return mc;
}

void write_rows_csv(const std::vector<ResultRow>& rows,
                    const std::string& path) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write rows CSV: " + path);
  out << kResultCsvHeader << "\n";
  for (const auto& r : rows) {
    out << r.variant << ',' << r.qubits << ',' << r.gates << ',' << r.run
        << ',' << r.circuit << ',' << r.candidate << ','
        << fmt_double(r.gate_red_pct) << ',' << fmt_double(r.depth_red_pct)
        << ',' << fmt_double(r.density_mse) << "\n";
  }
}

std::vector<ResultRow> read_rows_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rows CSV: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kResultCsvHeader) {
    throw IoError("rows CSV has an unexpected header: " + path);
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    ResultRow r;
    std::string field;
    auto next = [&ls, &field, &path]() -> std::string& {
      if (!std::getline(ls, field, ',')) {
        throw IoError("short row in CSV: " + path);
      }
      return field;
    };
    r.variant = next();
    r.qubits = std::stoi(next());
    r.gates = std::stoi(next());
    r.run = std::stoi(next());
    r.circuit = std::stoi(next());
    r.candidate = std::stoi(next());
    r.gate_red_pct = std::stod(next());
    r.depth_red_pct = std::stod(next());
    r.density_mse = std::stod(next());
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string size_dir(const ExperimentConfig& config, int qubits, int gates) {
  return config.out_dir + "/data/q" + std::to_string(qubits) + "g" +
         std::to_string(gates);
}

std::string circuit_path(const ExperimentConfig& config, int qubits, int gates,
                         int index) {
  return size_dir(config, qubits, gates) + "/circuit_" + zero_pad(index, 4) +
         ".qc";
}

SplitManifest load_split(const ExperimentConfig& config, int qubits,
                         int gates) {
  const std::string path = size_dir(config, qubits, gates) + "/split.json";
  std::ifstream in(path);
  if (!in) throw IoError("missing split manifest: " + path);
  nlohmann::json j;
  in >> j;
  SplitManifest m;
  for (const auto& v : j.at("train")) m.train.push_back(v.get<int>());
  for (const auto& v : j.at("test")) m.test.push_back(v.get<int>());
  return m;
}

std::vector<QuantumCircuit> load_circuits(const ExperimentConfig& config,
                                          int qubits, int gates,
                                          const std::vector<int>& ids) {
  std::vector<QuantumCircuit> out;
  out.reserve(ids.size());
  for (int id : ids) {
    out.push_back(load_circuit_text(circuit_path(config, qubits, gates, id)));
  }
  return out;
}

std::string checkpoint_dir(const ExperimentConfig& config,
                           const std::string& variant, int qubits, int gates,
                           int run) {
  return config.out_dir + "/ckpt/" + variant + "/q" + std::to_string(qubits) +
         "g" + std::to_string(gates) + "/run" + std::to_string(run);
}

void cmd_generate(const ExperimentConfig& config) {
  validate_experiment(config);
  for (int q : config.qubit_counts) {
    for (int g : config.gate_counts) {
      fs::create_directories(size_dir(config, q, g));
      for (int i = 0; i < config.circuits_per_size; ++i) {
        const auto circuit = random_circuit(
            q, g,
            derive_seed(config.seed, 0xdA7A, static_cast<std::uint64_t>(q) << 16 |
                                                 static_cast<std::uint64_t>(g),
                        static_cast<std::uint64_t>(i)));
        save_circuit_text(circuit, circuit_path(config, q, g, i));
      }

      std::vector<int> ids(static_cast<std::size_t>(config.circuits_per_size));
      std::iota(ids.begin(), ids.end(), 0);
      Rng rng(derive_seed(config.seed, 0x5b17,
                          static_cast<std::uint64_t>(q) << 16 |
                              static_cast<std::uint64_t>(g)));
      rng.shuffle(ids);
      const auto n_train = static_cast<std::size_t>(
          config.train_fraction * config.circuits_per_size);
      SplitManifest split;
      split.train.assign(ids.begin(), ids.begin() + static_cast<long>(n_train));
      split.test.assign(ids.begin() + static_cast<long>(n_train), ids.end());
      std::sort(split.train.begin(), split.train.end());
      std::sort(split.test.begin(), split.test.end());

      nlohmann::ordered_json j;
      j["train"] = split.train;
      j["test"] = split.test;
      std::ofstream out(size_dir(config, q, g) + "/split.json");
      if (!out) throw IoError("cannot write split manifest");
      out << j.dump(2) << "\n";
    }
  }
}

void cmd_train(const ExperimentConfig& config) {
  validate_experiment(config);
  const ModelConfig mc = model_config_of(config);
  for (const auto& vname : config.variants) {
    const ModelVariant variant = *variant_from_name(vname);
    for (int q : config.qubit_counts) {
      for (int g : config.gate_counts) {
        const SplitManifest split = load_split(config, q, g);
        const auto train_set = load_circuits(config, q, g, split.train);
        const auto test_set = load_circuits(config, q, g, split.test);
        for (int run = 0; run < config.runs_per_model; ++run) {
          TrainConfig tc;
          tc.epochs = config.epochs;
          tc.batch_size = config.batch_size;
          tc.learning_rate = config.learning_rate;
          tc.beta = config.beta;
          tc.variant = variant;
          tc.val_every = config.val_every;
          tc.seed = derive_seed(config.seed, variant_tag(vname),
                                static_cast<std::uint64_t>(q) << 16 |
                                    static_cast<std::uint64_t>(g),
                                static_cast<std::uint64_t>(run));
          const TrainResult result = train(train_set, test_set, tc, mc);

          const std::string dir = checkpoint_dir(config, vname, q, g, run);
          save_checkpoint(result.params, dir);
          std::ofstream hist(dir + "/history.csv");
          if (!hist) throw IoError("cannot write training history");
          hist << "epoch,train_loss,val_loss,val_density_mse\n";
          for (const auto& s : result.history) {
            hist << s.epoch << ',' << fmt_double(s.train_loss) << ','
                 << fmt_double(s.val_loss) << ','
                 << fmt_double(s.val_density_mse) << "\n";
          }
        }
      }
    }
  }
}

namespace {

nlohmann::ordered_json candidate_json(const Candidate& c) {
  nlohmann::ordered_json j;
  j["circuit"] = nlohmann::ordered_json::parse(circuit_to_json(c.circuit));
  j["density_mse"] = c.density_mse;
  j["transpiled_gates"] = c.transpiled_gates;
  j["transpiled_depth"] = c.transpiled_depth;
  j["encoding_index"] = c.encoding_index;
  j["decoding_index"] = c.decoding_index;
  j["noise_scale"] = c.noise_scale;
  return j;
}

}  // namespace

void cmd_eval(const ExperimentConfig& config) {
  validate_experiment(config);
  std::vector<ResultRow> rows;
  for (const auto& vname : config.variants) {
    for (int q : config.qubit_counts) {
      const CouplingMap map = map_for(config, q);
      for (int g : config.gate_counts) {
        const SplitManifest split = load_split(config, q, g);
        const auto test_set = load_circuits(config, q, g, split.test);
        for (int run = 0; run < config.runs_per_model; ++run) {
          const ModelParams params =
              load_checkpoint(checkpoint_dir(config, vname, q, g, run));
          for (std::size_t ti = 0; ti < test_set.size(); ++ti) {
            const auto& source = test_set[ti];
            const int circuit_id = split.test[ti];
            const TranspiledCircuit source_t =
                transpile(source, map, config.opt_level);
            if (source_t.transpiled_gate_count == 0 || source_t.depth == 0) {
              continue;  // nothing to reduce against
            }
            Rng rng(derive_seed(config.seed,
                                variant_tag(vname) ^ 0xe7a1,
                                static_cast<std::uint64_t>(q) << 32 |
                                    static_cast<std::uint64_t>(g) << 16 |
                                    static_cast<std::uint64_t>(run),
                                static_cast<std::uint64_t>(circuit_id)));
            const auto candidates =
                reconstruct(source, params, config.n_enc, config.n_dec, map,
                            config.opt_level, rng);

            for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
              const auto& cand = candidates[ci];
              ResultRow r;
              r.variant = vname;
              r.qubits = q;
              r.gates = g;
              r.run = run;
              r.circuit = circuit_id;
              r.candidate = static_cast<int>(ci);
              r.gate_red_pct = reduction_pct(source_t.transpiled_gate_count,
                                             cand.transpiled_gates);
              r.depth_red_pct =
                  reduction_pct(source_t.depth, cand.transpiled_depth);
              r.density_mse = cand.density_mse;
              rows.push_back(std::move(r));
            }

            const auto best = select_best(candidates, config.mse_tol,
                                          source_t.transpiled_gate_count);
            nlohmann::ordered_json report;
            report["circuit_id"] = circuit_id;
            report["source"] =
                nlohmann::ordered_json::parse(circuit_to_json(source));
            report["source_metrics"] = {
                {"transpiled_gates", source_t.transpiled_gate_count},
                {"transpiled_depth", source_t.depth}};
            report["candidates"] = nlohmann::ordered_json::array();
            for (const auto& cand : candidates) {
              report["candidates"].push_back(candidate_json(cand));
            }
            if (best) {
              report["selected"] = candidate_json(*best);
            } else {
              report["selected"] = nullptr;
            }
            const std::string report_dir = config.out_dir + "/eval/reports/" +
                                           vname + "/q" + std::to_string(q) +
                                           "g" + std::to_string(g) + "/run" +
                                           std::to_string(run);
            fs::create_directories(report_dir);
            std::ofstream rout(report_dir + "/circuit_" +
                               zero_pad(circuit_id, 4) + ".json");
            if (!rout) throw IoError("cannot write search report");
            rout << report.dump(2) << "\n";
          }
        }
      }
    }
  }
  write_rows_csv(rows, config.out_dir + "/eval/rows.csv");
}

void cmd_baseline(const ExperimentConfig& config) {
  validate_experiment(config);
  std::vector<ResultRow> rows;
  for (int q : config.qubit_counts) {
    const CouplingMap map = map_for(config, q);
    for (int g : config.gate_counts) {
      const SplitManifest split = load_split(config, q, g);
      const auto test_set = load_circuits(config, q, g, split.test);
      for (std::size_t ti = 0; ti < test_set.size(); ++ti) {
        const auto& source = test_set[ti];
        const TranspiledCircuit plain = transpile(source, map, 0);
        const TranspiledCircuit reduced = transpile(source, map, 1);
        if (plain.transpiled_gate_count == 0 || plain.depth == 0) continue;

        const DensityMatrix source_rho = density_matrix(simulate(source));
        ResultRow r;
        r.variant = "baseline";
        r.qubits = q;
        r.gates = g;
        r.run = 0;
        r.circuit = split.test[ti];
        r.candidate = 0;
        r.gate_red_pct = reduction_pct(plain.transpiled_gate_count,
                                       reduced.transpiled_gate_count);
        r.depth_red_pct = reduction_pct(plain.depth, reduced.depth);
        r.density_mse = density_mse(
            source_rho, transpiled_logical_density(reduced, source.num_qubits));
        rows.push_back(std::move(r));
      }
    }
  }
  write_rows_csv(rows, config.out_dir + "/baseline/rows.csv");
}

}  // namespace qresynth
