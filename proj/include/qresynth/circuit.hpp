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
#include <string_view>
#include <vector>

#include "qresynth/gate.hpp"

namespace qresynth {

struct GateApplication {
  GateKind kind;
  std::vector<int> qubits;  // length == gate_arity(kind), pairwise distinct

  bool operator==(const GateApplication&) const = default;
};

struct QuantumCircuit {
  int num_qubits = 0;
  std::vector<GateApplication> gates;

  bool operator==(const QuantumCircuit&) const = default;

  void append(GateKind kind, std::vector<int> qubits) {
    gates.push_back({kind, std::move(qubits)});
  }
};

/// Throws InvalidCircuit when an operand is out of range, repeated, or the
/// operand count does not match the gate arity.
void validate(const QuantumCircuit& circuit);

/// Uniform random circuit: kind drawn uniformly from the vocabulary
/// (single-qubit kinds only when n_qubits == 1), operands drawn uniformly
/// without replacement. Deterministic for a given seed.
QuantumCircuit random_circuit(int n_qubits, int n_gates, std::uint64_t seed);

// --- line-based text format ---
//   qubits N
//   gate <kind> <q0> [<q1>]
// Blank lines and '#' comments are ignored.
std::string circuit_to_text(const QuantumCircuit& circuit);
QuantumCircuit circuit_from_text(std::string_view text);

// --- JSON mirror: {"num_qubits": N, "gates": [{"kind": ..., "qubits": [...]}]} ---
std::string circuit_to_json(const QuantumCircuit& circuit);
QuantumCircuit circuit_from_json(std::string_view json_text);

// File helpers; format chosen by extension in the CLI, explicit here.
QuantumCircuit load_circuit_text(const std::string& path);
void save_circuit_text(const QuantumCircuit& circuit, const std::string& path);

}  // namespace qresynth
