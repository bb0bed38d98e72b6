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

#include "qresynth/dag.hpp"
#include "qresynth/error.hpp"
#include "qresynth/rng.hpp"
#include "qresynth/simulator.hpp"

using namespace qresynth;

TEST_CASE("a 4-qubit 16-gate circuit yields 18 nodes and start out-degree 4") {
  const auto c = random_circuit(4, 16, 1);
  const auto dag = circuit_to_dag(c);
  CHECK(dag.nodes.size() == 18);
  CHECK(dag_num_qubits(dag) == 4);
  CHECK_NOTHROW(validate_dag(dag));
  const auto order = topological_order(dag);
  CHECK(order.front() == 0);   // start first
  CHECK(order.back() == 17);   // end 18th
}

TEST_CASE("empty circuit wires start straight to end") {
  QuantumCircuit c;
  c.num_qubits = 2;
  const auto dag = circuit_to_dag(c);
  REQUIRE(dag.nodes.size() == 2);
  REQUIRE(dag.edges.size() == 2);
  for (const auto& e : dag.edges) {
    CHECK(e.src == 0);
    CHECK(e.dst == 1);
    CHECK(e.src_port == e.dst_port);
  }
  CHECK(dag_to_circuit(dag) == c);
}

TEST_CASE("single-gate chain on one qubit") {
  QuantumCircuit c;
  c.num_qubits = 1;
  c.append(GateKind::x, {0});
  const auto dag = circuit_to_dag(c);
  CHECK(dag.nodes.size() == 3);
  const auto order = topological_order(dag);
  CHECK(order == std::vector<int>{0, 1, 2});
}

TEST_CASE("topological order breaks ties by ascending node id") {
  // Two independent gates: both become ready together.
  QuantumCircuit c;
  c.num_qubits = 2;
  c.append(GateKind::x, {0});
  c.append(GateKind::y, {1});
  const auto dag = circuit_to_dag(c);
  const auto order = topological_order(dag);
  CHECK(order == std::vector<int>{0, 1, 2, 3});

  // Insertion order flipped: ids flip, order still ascending.
  QuantumCircuit c2;
  c2.num_qubits = 2;
  c2.append(GateKind::y, {1});
  c2.append(GateKind::x, {0});
  CHECK(topological_order(circuit_to_dag(c2)) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("cycle detection") {
  CircuitDag dag;
  dag.nodes.push_back({DagNodeType::start, GateKind::x});
  dag.nodes.push_back({DagNodeType::gate, GateKind::x});
  dag.nodes.push_back({DagNodeType::gate, GateKind::x});
  dag.nodes.push_back({DagNodeType::end, GateKind::x});
  dag.edges.push_back({0, 0, 3, 0});
  dag.edges.push_back({1, 0, 2, 0});
  dag.edges.push_back({2, 0, 1, 0});  // back edge
  CHECK_THROWS_AS(topological_order(dag), CycleDetected);
  CHECK_THROWS_AS(validate_dag(dag), InvalidDag);
}

TEST_CASE("validate_dag flags structural violations") {
  // Dangling gate input port.
  CircuitDag dag;
  dag.nodes.push_back({DagNodeType::start, GateKind::x});
  dag.nodes.push_back({DagNodeType::gate, GateKind::cx});
  dag.nodes.push_back({DagNodeType::end, GateKind::x});
  dag.edges.push_back({0, 0, 1, 0});
  dag.edges.push_back({1, 0, 2, 0});
  dag.edges.push_back({0, 1, 2, 1});
  // cx input port 1 and output port 1 dangle
  CHECK_THROWS_AS(validate_dag(dag), InvalidDag);

  // Output port used twice.
  CircuitDag dup;
  dup.nodes.push_back({DagNodeType::start, GateKind::x});
  dup.nodes.push_back({DagNodeType::gate, GateKind::cx});
  dup.nodes.push_back({DagNodeType::end, GateKind::x});
  dup.edges.push_back({0, 0, 1, 0});
  dup.edges.push_back({0, 0, 1, 1});
  dup.edges.push_back({1, 0, 2, 0});
  dup.edges.push_back({1, 1, 2, 1});
  CHECK_THROWS_AS(validate_dag(dup), InvalidDag);

  // Node 0 must be the start node.
  CircuitDag wrong;
  wrong.nodes.push_back({DagNodeType::end, GateKind::x});
  wrong.nodes.push_back({DagNodeType::start, GateKind::x});
  CHECK_THROWS_AS(validate_dag(wrong), InvalidDag);
}

TEST_CASE("round-trip preserves the exact gate sequence") {
  Rng seeds(123);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(seeds.next_below(5));
    const int g = 4 + static_cast<int>(seeds.next_below(28));
    const auto c = random_circuit(n, g, seeds.next_u64());
    const auto back = dag_to_circuit(circuit_to_dag(c));
    CHECK(back == c);
  }
}

TEST_CASE("round-trip density matrices match exactly") {
  Rng seeds(321);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(seeds.next_below(5));
    const auto c = random_circuit(n, 16, seeds.next_u64());
    const auto back = dag_to_circuit(circuit_to_dag(c));
    const auto rho_a = density_matrix(simulate(c));
    const auto rho_b = density_matrix(simulate(back));
    CHECK(density_mse(rho_a, rho_b) == 0.0);
  }
}

TEST_CASE("circuit_to_dag output always validates (property)") {
  Rng seeds(777);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(seeds.next_below(6));
    const int g = static_cast<int>(seeds.next_below(40));
    const auto dag = circuit_to_dag(random_circuit(n, g, seeds.next_u64()));
    CHECK_NOTHROW(validate_dag(dag));
    const auto labels = edge_wire_labels(dag);
    for (int label : labels) {
      CHECK(label >= 0);
      CHECK(label < n);
    }
  }
}

TEST_CASE("dag json round-trips") {
  const auto dag = circuit_to_dag(random_circuit(3, 12, 5));
  const auto text = dag_to_json(dag);
  const auto back = dag_from_json(text);
  REQUIRE(back.nodes.size() == dag.nodes.size());
  REQUIRE(back.edges.size() == dag.edges.size());
  for (std::size_t i = 0; i < dag.edges.size(); ++i) {
    CHECK(back.edges[i] == dag.edges[i]);
  }
  CHECK(dag_to_circuit(back) == dag_to_circuit(dag));
}

TEST_CASE("wire labels follow pass-through at swap-like gates") {
  QuantumCircuit c;
  c.num_qubits = 2;
  c.append(GateKind::swap, {0, 1});
  const auto dag = circuit_to_dag(c);
  const auto labels = edge_wire_labels(dag);
  // swap input port 0 took qubit 0, so output port 0 still carries qubit 0:
  // the unitary, not the wiring, performs the exchange.
  for (std::size_t e = 0; e < dag.edges.size(); ++e) {
    const auto& edge = dag.edges[e];
    if (edge.src == 1) CHECK(labels[e] == edge.src_port);
  }
}
