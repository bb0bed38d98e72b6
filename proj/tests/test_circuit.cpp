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

#include "qresynth/circuit.hpp"
#include "qresynth/error.hpp"

using namespace qresynth;

TEST_CASE("random_circuit honors the count and operand contracts") {
  const auto c = random_circuit(4, 16, 11);
  CHECK(c.num_qubits == 4);
  CHECK(c.gates.size() == 16);
  CHECK_NOTHROW(validate(c));

  const auto c2 = random_circuit(2, 24, 5);
  CHECK(c2.gates.size() == 24);
  for (const auto& g : c2.gates) {
    for (int q : g.qubits) {
      CHECK(q >= 0);
      CHECK(q < 2);
    }
  }
}

TEST_CASE("random_circuit is deterministic per seed") {
  CHECK(random_circuit(4, 32, 9) == random_circuit(4, 32, 9));
  CHECK(random_circuit(4, 32, 9) != random_circuit(4, 32, 10));
}

TEST_CASE("random_circuit on one qubit only draws single-qubit kinds") {
  const auto c = random_circuit(1, 64, 3);
  for (const auto& g : c.gates) CHECK(gate_arity(g.kind) == 1);
}

TEST_CASE("text format round-trips") {
  const auto c = random_circuit(3, 20, 42);
  const auto text = circuit_to_text(c);
  CHECK(circuit_from_text(text) == c);
}

TEST_CASE("text format ignores comments and blank lines") {
  const auto c = circuit_from_text(
      "# header comment\n"
      "qubits 2\n"
      "\n"
      "gate h 0   # put qubit 0 in superposition\n"
      "gate cx 0 1\n");
  CHECK(c.num_qubits == 2);
  REQUIRE(c.gates.size() == 2);
  CHECK(c.gates[0].kind == GateKind::h);
  CHECK(c.gates[1] == GateApplication{GateKind::cx, {0, 1}});
}

TEST_CASE("text parser rejects malformed input") {
  CHECK_THROWS_AS(circuit_from_text("gate x 0\n"), InvalidCircuit);
  CHECK_THROWS_AS(circuit_from_text("qubits 0\n"), InvalidCircuit);
  CHECK_THROWS_AS(circuit_from_text("qubits 2\ngate nope 0\n"), InvalidCircuit);
  CHECK_THROWS_AS(circuit_from_text("qubits 2\ngate x 5\n"), InvalidCircuit);
  CHECK_THROWS_AS(circuit_from_text("qubits 2\ngate cx 1 1\n"), InvalidCircuit);
  CHECK_THROWS_AS(circuit_from_text("qubits 2\ngate cx 0\n"), InvalidCircuit);
  CHECK_THROWS_AS(circuit_from_text("qubits 2\nbogus\n"), InvalidCircuit);
}

TEST_CASE("json mirror round-trips") {
  const auto c = random_circuit(5, 24, 17);
  CHECK(circuit_from_json(circuit_to_json(c)) == c);
  CHECK_THROWS_AS(circuit_from_json("{"), InvalidCircuit);
  CHECK_THROWS_AS(circuit_from_json("{\"gates\": []}"), InvalidCircuit);
}

TEST_CASE("validate rejects bad operand lists") {
  QuantumCircuit c;
  c.num_qubits = 2;
  c.append(GateKind::cx, {0});
  CHECK_THROWS_AS(validate(c), InvalidCircuit);
  c.gates.clear();
  c.append(GateKind::x, {0, 1});
  CHECK_THROWS_AS(validate(c), InvalidCircuit);
}
