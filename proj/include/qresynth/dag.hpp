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

#include <string>
#include <string_view>
#include <vector>

#include "qresynth/circuit.hpp"
#include "qresynth/gate.hpp"

namespace qresynth {

enum class DagNodeType : int { start, end, gate };

struct DagNode {
  DagNodeType type;
  GateKind kind;  // meaningful only when type == gate

  bool operator==(const DagNode&) const = default;
};

struct DagEdge {
  int src;
  int src_port;
  int dst;
  int dst_port;

  bool operator==(const DagEdge&) const = default;
};

/// Port-labelled circuit DAG. Node 0 is the start node and the last node is
/// the end node; the start node has one output port per qubit and the end
/// node one input port per qubit. Every gate node uses each of its arity
/// input and output ports exactly once.
struct CircuitDag {
  std::vector<DagNode> nodes;
  std::vector<DagEdge> edges;
};

/// Number of qubits implied by the start node's out-degree.
int dag_num_qubits(const CircuitDag& dag);

/// Node type index used by the models: gate kinds 0..21, start 22, end 23.
inline constexpr int kNodeTypeCount = kGateKindCount + 2;
inline constexpr int kStartTypeId = kGateKindCount;
inline constexpr int kEndTypeId = kGateKindCount + 1;
int node_type_id(const DagNode& node);

/// Checks every structural invariant; throws InvalidDag (CycleDetected for
/// cycles) with a description of the first violation found.
void validate_dag(const CircuitDag& dag);

/// Deterministic topological order: start first, end last, ties broken by
/// ascending node id. Throws CycleDetected.
std::vector<int> topological_order(const CircuitDag& dag);

/// One gate node per application in circuit order; input port j of a gate
/// attaches to the dangling output of its j-th operand qubit, and qubit i's
/// final dangling output attaches to end input port i.
CircuitDag circuit_to_dag(const QuantumCircuit& circuit);

/// Emits gates in canonical topological order, recovering operands from the
/// wire labels carried by the ports. Validates the DAG first.
QuantumCircuit dag_to_circuit(const CircuitDag& dag);

/// Qubit label carried by each edge (the wire that flows through it),
/// indexed like dag.edges. Start output port i carries qubit i; a gate's
/// output port i carries whatever entered its input port i.
std::vector<int> edge_wire_labels(const CircuitDag& dag);

// In/out edge lists per node, each sorted by port number; built once and
// shared by the encoders and the decoder's teacher-forced pass.
struct DagAdjacency {
  // For node v: in_edges[v] lists indices into dag.edges sorted by dst_port,
  // out_edges[v] sorted by src_port.
  std::vector<std::vector<int>> in_edges;
  std::vector<std::vector<int>> out_edges;
};
DagAdjacency build_adjacency(const CircuitDag& dag);

// --- JSON: {"nodes": [{"type": "start"|"end"|<kind>}...], "edges": [[s,sp,d,dp]...]} ---
std::string dag_to_json(const CircuitDag& dag);
CircuitDag dag_from_json(std::string_view json_text);

}  // namespace qresynth
