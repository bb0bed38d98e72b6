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
#include <vector>

#include "qresynth/circuit.hpp"
#include "qresynth/coupling.hpp"
#include "qresynth/simulator.hpp"

namespace qresynth {

/// rz angle; kept as an exact multiple of pi/4 where the source gate implies
/// one so that peephole cancellation stays exact.
struct RzAngle {
  bool exact = false;
  int pi4_units = 0;    // angle = pi4_units * pi/4 when exact
  double radians = 0.0;

  static RzAngle from_pi4(int units);
  static RzAngle from_radians(double radians);
  /// Snaps to the pi/4 grid when within 1e-9 of it.
  static RzAngle snapped(double radians);

  double value() const { return radians; }
  /// True when the angle is 0 modulo 2*pi (identity up to global phase).
  bool is_zero_mod_2pi() const;
};

/// Gate in a lowered circuit: one of the 22 vocabulary kinds or an rz.
struct PhysGate {
  bool is_rz = false;
  GateKind kind = GateKind::id;  // meaningful when !is_rz
  RzAngle angle{};               // meaningful when is_rz
  std::vector<int> qubits;

  int arity() const { return is_rz ? 1 : gate_arity(kind); }
  static PhysGate rz(RzAngle angle, int qubit);
  static PhysGate vocab(GateKind kind, std::vector<int> qubits);
};

struct PhysCircuit {
  int num_qubits = 0;
  std::vector<PhysGate> gates;

  static PhysCircuit from_circuit(const QuantumCircuit& circuit);
};

/// Injective wire -> physical map over all physical qubits; wires beyond the
/// logical count pad the register and always carry |0>.
struct Layout {
  std::vector<int> wire_to_physical;
  std::vector<int> physical_to_wire;

  static Layout trivial(int num_physical);
  void swap_physical(int pa, int pb);
};

struct TranspiledCircuit {
  PhysCircuit circuit;             // {rz, sx, x, cx} on physical qubits
  std::vector<int> final_layout;   // wire -> physical, logical wires first
  int source_gate_count = 0;
  int transpiled_gate_count = 0;
  int depth = 0;
};

/// Expansion of a two-qubit vocabulary gate over {cx} + 1-qubit vocabulary
/// kinds on template operands 0 and 1; phase-equivalent to the source gate
/// and at most 3 cx long.
std::vector<GateApplication> decompose_2q(GateKind kind);

/// Exact lowering of a 1-qubit vocabulary gate to {rz, sx, x} with pi/4-grid
/// angles.
std::vector<PhysGate> lower_1q_exact(GateKind kind);

/// Resynthesizes an arbitrary 1-qubit unitary as a subsequence of
/// [rz, sx, rz, sx, rz] on template operand 0, shortest template first.
/// Throws NotUnitary when u is not unitary within 1e-10.
std::vector<PhysGate> euler_1q(const Eigen::Matrix2cd& u);

struct RoutedCircuit {
  PhysCircuit circuit;  // on physical qubits; may contain swap markers
  Layout layout;        // final layout after inserted swaps
  int inserted_swaps = 0;
};

/// Greedy router: walks gates in order and, for a non-adjacent two-qubit
/// gate, swaps the first operand along the shortest physical path toward the
/// second (lowest-index ties first).
RoutedCircuit route(const PhysCircuit& circuit, const CouplingMap& map,
                    Layout initial);

/// Replaces every swap with its 3-cx expansion.
PhysCircuit expand_swaps(const PhysCircuit& circuit);

/// Deletes adjacent inverse pairs on identical operand sets until a fixpoint;
/// never increases the gate count and leaves the density matrix unchanged.
PhysCircuit peephole(const PhysCircuit& circuit);
QuantumCircuit peephole(const QuantumCircuit& circuit);

/// Full lowering: decompose 2q kinds, route, expand swaps, lower 1q gates
/// (fusing runs at opt 1), then peephole at opt 1.
TranspiledCircuit transpile(const QuantumCircuit& circuit,
                            const CouplingMap& map, int opt_level);

int gate_count(const QuantumCircuit& circuit);
int gate_count(const PhysCircuit& circuit);
/// Longest dependency chain; gates on disjoint qubits share a layer.
int depth(const QuantumCircuit& circuit);
int depth(const PhysCircuit& circuit);

/// 100 * (original - reduced) / original. Throws ZeroOriginal.
double reduction_pct(int original, int reduced);

Eigen::Matrix2cd rz_matrix(double angle);
Eigen::MatrixXcd phys_gate_unitary(const PhysGate& gate);
StateVector simulate(const PhysCircuit& circuit);

/// Density matrix of the logical register recovered from a transpiled
/// circuit: simulates on the physical register, undoes the final layout
/// permutation, and projects away the padding wires.
DensityMatrix transpiled_logical_density(const TranspiledCircuit& transpiled,
                                         int num_logical);

std::string transpile_report_json(const TranspiledCircuit& transpiled,
                                  int num_logical);

}  // namespace qresynth
