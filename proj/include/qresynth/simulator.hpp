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

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qresynth/circuit.hpp"

namespace qresynth {

inline constexpr int kMaxSimQubits = 12;
inline constexpr int kMaxUnitaryQubits = 6;

/// Dense statevector over basis states indexed big-endian: qubit 0 is the
/// most significant bit of the basis index.
struct StateVector {
  int num_qubits = 0;
  Eigen::VectorXcd amps;
};

struct DensityMatrix {
  Eigen::MatrixXcd entries;
};

/// |0...0> on n qubits. Throws TooLarge beyond kMaxSimQubits.
StateVector zero_state(int n);

/// Applies an arbitrary 2x2 or 4x4 unitary to the given operands, in the
/// operand-0-major convention. Throws OperandOutOfRange.
void apply_unitary_in_place(StateVector& state, const Eigen::MatrixXcd& u,
                            std::span<const int> qubits);

StateVector apply_gate(const StateVector& state, GateKind kind,
                       std::span<const int> qubits);

/// All gates applied in order to |0...0>.
StateVector simulate(const QuantumCircuit& circuit);

/// rho = |psi><psi|.
DensityMatrix density_matrix(const StateVector& state);

/// Mean squared modulus of the entrywise difference.
double density_mse(const DensityMatrix& a, const DensityMatrix& b);

double state_norm(const StateVector& state);

/// Checks Hermiticity, unit trace, and positive semidefiniteness; throws
/// Error describing the first violated property.
void check_density_matrix(const DensityMatrix& rho);

/// Full 2^N x 2^N unitary, built entrywise from embedded gate matrices (an
/// algebraic route independent of the statevector kernels). Throws TooLarge
/// for N > kMaxUnitaryQubits.
Eigen::MatrixXcd circuit_unitary(const QuantumCircuit& circuit);

/// Embeds a 1- or 2-qubit unitary into the full space by direct index
/// arithmetic.
Eigen::MatrixXcd embed_unitary(const Eigen::MatrixXcd& u,
                               std::span<const int> qubits, int num_qubits);

/// True iff u == c*v entrywise within tol for some unit scalar c; c is read
/// off the first maximum-modulus entry of v in row-major order.
bool phase_equivalent(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v,
                      double tol);

/// JSON array of [re, im] pairs, row-major.
std::string density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const std::string& text);

}  // namespace qresynth
