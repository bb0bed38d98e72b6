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

#include "qresynth/circuit.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qresynth/error.hpp"
#include "qresynth/rng.hpp"

namespace qresynth {

void validate(const QuantumCircuit& circuit) {
  if (circuit.num_qubits < 1) {
    throw InvalidCircuit("circuit must have at least one qubit");
  }
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const auto& g = circuit.gates[i];
    const int arity = gate_arity(g.kind);
    if (static_cast<int>(g.qubits.size()) != arity) {
      throw InvalidCircuit("gate " + std::to_string(i) + " (" +
                           std::string(gate_name(g.kind)) + ") expects " +
                           std::to_string(arity) + " operands");
    }
    for (int q : g.qubits) {
      if (q < 0 || q >= circuit.num_qubits) {
        throw InvalidCircuit("gate " + std::to_string(i) +
                             " operand out of range: " + std::to_string(q));
      }
    }
    if (arity == 2 && g.qubits[0] == g.qubits[1]) {
      throw InvalidCircuit("gate " + std::to_string(i) +
                           " has repeated operands");
    }
  }
}

QuantumCircuit random_circuit(int n_qubits, int n_gates, std::uint64_t seed) {
  if (n_qubits < 1) throw InvalidCircuit("n_qubits must be >= 1");
  Rng rng(seed);
  QuantumCircuit c;
  c.num_qubits = n_qubits;
  c.gates.reserve(static_cast<std::size_t>(n_gates));
  const int kind_count = n_qubits >= 2 ? kGateKindCount : kSingleQubitKinds;
  for (int i = 0; i < n_gates; ++i) {
    const auto kind = static_cast<GateKind>(rng.next_below(kind_count));
    std::vector<int> qs;
    qs.push_back(static_cast<int>(rng.next_below(n_qubits)));
    if (gate_arity(kind) == 2) {
      // Second operand drawn uniformly from the remaining qubits.
      int q = static_cast<int>(rng.next_below(n_qubits - 1));
      if (q >= qs[0]) ++q;
      qs.push_back(q);
    }
    c.gates.push_back({kind, std::move(qs)});
  }
  return c;
}

std::string circuit_to_text(const QuantumCircuit& circuit) {
  std::ostringstream out;
  out << "qubits " << circuit.num_qubits << "\n";
  for (const auto& g : circuit.gates) {
    out << "gate " << gate_name(g.kind);
    for (int q : g.qubits) out << ' ' << q;
    out << "\n";
  }
  return out.str();
}

QuantumCircuit circuit_from_text(std::string_view text) {
  QuantumCircuit c;
  bool saw_header = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;  // blank or comment-only line
    if (word == "qubits") {
      if (saw_header) {
        throw InvalidCircuit("line " + std::to_string(line_no) +
                             ": duplicate qubits header");
      }
      if (!(ls >> c.num_qubits) || c.num_qubits < 1) {
        throw InvalidCircuit("line " + std::to_string(line_no) +
                             ": bad qubit count");
      }
      saw_header = true;
    } else if (word == "gate") {
      if (!saw_header) {
        throw InvalidCircuit("gate before qubits header at line " +
                             std::to_string(line_no));
      }
      std::string name;
      if (!(ls >> name)) {
        throw InvalidCircuit("line " + std::to_string(line_no) +
                             ": missing gate name");
      }
      const auto kind = gate_from_name(name);
      if (!kind) {
        throw InvalidCircuit("line " + std::to_string(line_no) +
                             ": unknown gate '" + name + "'");
      }
      GateApplication g{*kind, {}};
      int q;
      while (ls >> q) g.qubits.push_back(q);
      c.gates.push_back(std::move(g));
    } else {
      throw InvalidCircuit("line " + std::to_string(line_no) +
                           ": unexpected token '" + word + "'");
    }
  }
  if (!saw_header) throw InvalidCircuit("missing qubits header");
  validate(c);
  return c;
}

std::string circuit_to_json(const QuantumCircuit& circuit) {
  nlohmann::ordered_json j;
  j["num_qubits"] = circuit.num_qubits;
  j["gates"] = nlohmann::ordered_json::array();
  for (const auto& g : circuit.gates) {
    nlohmann::ordered_json jg;
    jg["kind"] = std::string(gate_name(g.kind));
    jg["qubits"] = g.qubits;
    j["gates"].push_back(std::move(jg));
  }
  return j.dump();
}

QuantumCircuit circuit_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidCircuit(std::string("bad circuit JSON: ") + e.what());
  }
  QuantumCircuit c;
  if (!j.contains("num_qubits") || !j["num_qubits"].is_number_integer()) {
    throw InvalidCircuit("circuit JSON missing num_qubits");
  }
  c.num_qubits = j["num_qubits"].get<int>();
  for (const auto& jg : j.value("gates", nlohmann::json::array())) {
    const auto kind = gate_from_name(jg.at("kind").get<std::string>());
    if (!kind) {
      throw InvalidCircuit("unknown gate kind in JSON: " +
                           jg.at("kind").get<std::string>());
    }
    GateApplication g{*kind, {}};
    for (const auto& q : jg.at("qubits")) g.qubits.push_back(q.get<int>());
    c.gates.push_back(std::move(g));
  }
  validate(c);
  return c;
}

QuantumCircuit load_circuit_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open circuit file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return circuit_from_text(ss.str());
}

void save_circuit_text(const QuantumCircuit& circuit, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write circuit file: " + path);
  out << circuit_to_text(circuit);
}

}  // namespace qresynth
