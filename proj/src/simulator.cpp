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

#include "qresynth/simulator.hpp"

#include <nlohmann/json.hpp>

#include "qresynth/error.hpp"

namespace qresynth {

namespace {

using Complex = std::complex<double>;

void check_operands(const StateVector& state, std::span<const int> qubits) {
  for (int q : qubits) {
    if (q < 0 || q >= state.num_qubits) {
      throw OperandOutOfRange("operand " + std::to_string(q) +
                              " outside 0.." +
                              std::to_string(state.num_qubits - 1));
    }
  }
  if (qubits.size() == 2 && qubits[0] == qubits[1]) {
    throw OperandOutOfRange("two-qubit gate with repeated operand");
  }
}

}  // namespace

StateVector zero_state(int n) {
  if (n < 1) throw InvalidCircuit("state needs at least one qubit");
  if (n > kMaxSimQubits) {
    throw TooLarge("statevector capped at " + std::to_string(kMaxSimQubits) +
                   " qubits");
  }
  StateVector s;
  s.num_qubits = n;
  s.amps = Eigen::VectorXcd::Zero(std::int64_t{1} << n);
  s.amps[0] = 1.0;
  return s;
}

void apply_unitary_in_place(StateVector& state, const Eigen::MatrixXcd& u,
                            std::span<const int> qubits) {
  check_operands(state, qubits);
  const int n = state.num_qubits;
  if (qubits.size() == 1) {
    if (u.rows() != 2 || u.cols() != 2) {
      throw DimensionMismatch("expected a 2x2 matrix for a 1-qubit operand");
    }
    const std::int64_t stride = std::int64_t{1} << (n - 1 - qubits[0]);
    const std::int64_t size = state.amps.size();
    for (std::int64_t base = 0; base < size; ++base) {
      if (base & stride) continue;
      const Complex a0 = state.amps[base];
      const Complex a1 = state.amps[base | stride];
      state.amps[base] = u(0, 0) * a0 + u(0, 1) * a1;
      state.amps[base | stride] = u(1, 0) * a0 + u(1, 1) * a1;
    }
    return;
  }
  if (qubits.size() == 2) {
    if (u.rows() != 4 || u.cols() != 4) {
      throw DimensionMismatch("expected a 4x4 matrix for 2-qubit operands");
    }
    const std::int64_t s0 = std::int64_t{1} << (n - 1 - qubits[0]);
    const std::int64_t s1 = std::int64_t{1} << (n - 1 - qubits[1]);
    const std::int64_t size = state.amps.size();
    for (std::int64_t base = 0; base < size; ++base) {
      if ((base & s0) || (base & s1)) continue;
      Complex a[4] = {state.amps[base], state.amps[base | s1],
                      state.amps[base | s0], state.amps[base | s0 | s1]};
      for (int r = 0; r < 4; ++r) {
        Complex acc = 0.0;
        for (int c = 0; c < 4; ++c) acc += u(r, c) * a[c];
        const std::int64_t idx =
            base | ((r & 2) ? s0 : 0) | ((r & 1) ? s1 : 0);
        state.amps[idx] = acc;
      }
    }
    return;
  }
  throw DimensionMismatch("only 1- and 2-qubit unitaries are supported");
}

StateVector apply_gate(const StateVector& state, GateKind kind,
                       std::span<const int> qubits) {
  StateVector out = state;
  apply_unitary_in_place(out, gate_unitary(kind), qubits);
  return out;
}

StateVector simulate(const QuantumCircuit& circuit) {
  validate(circuit);
  StateVector s = zero_state(circuit.num_qubits);
  for (const auto& g : circuit.gates) {
    apply_unitary_in_place(s, gate_unitary(g.kind), g.qubits);
  }
  return s;
}

DensityMatrix density_matrix(const StateVector& state) {
  DensityMatrix rho;
  rho.entries = state.amps * state.amps.adjoint();
  return rho;
}

double density_mse(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.entries.rows() != b.entries.rows() ||
      a.entries.cols() != b.entries.cols()) {
    throw DimensionMismatch("density matrices differ in size");
  }
  const double total = (a.entries - b.entries).squaredNorm();
  return total / static_cast<double>(a.entries.size());
}

double state_norm(const StateVector& state) { return state.amps.norm(); }

void check_density_matrix(const DensityMatrix& rho) {
  const auto& m = rho.entries;
  if (m.rows() != m.cols()) throw DimensionMismatch("density matrix not square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error("density matrix not Hermitian");
  }
  if (std::abs(m.trace() - Complex{1.0, 0.0}) > 1e-10) {
    throw Error("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.eigenvalues().minCoeff() < -1e-9) {
    throw Error("density matrix not positive semidefinite");
  }
}

Eigen::MatrixXcd embed_unitary(const Eigen::MatrixXcd& u,
                               std::span<const int> qubits, int num_qubits) {
  const std::int64_t dim = std::int64_t{1} << num_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<std::int64_t> strides;
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits) {
      throw OperandOutOfRange("operand outside register");
    }
    strides.push_back(std::int64_t{1} << (num_qubits - 1 - q));
  }
  std::int64_t operand_mask = 0;
  for (auto s : strides) operand_mask |= s;
  const int k = static_cast<int>(qubits.size());
  const int sub = 1 << k;

  for (std::int64_t col = 0; col < dim; ++col) {
    std::int64_t cbits = 0;
    for (int j = 0; j < k; ++j) {
      if (col & strides[static_cast<std::size_t>(j)]) cbits |= sub >> (j + 1);
    }
    const std::int64_t rest = col & ~operand_mask;
    for (int rbits = 0; rbits < sub; ++rbits) {
      std::int64_t row = rest;
      for (int j = 0; j < k; ++j) {
        if (rbits & (sub >> (j + 1))) row |= strides[static_cast<std::size_t>(j)];
      }
      m(row, col) = u(rbits, cbits);
    }
  }
  return m;
}

Eigen::MatrixXcd circuit_unitary(const QuantumCircuit& circuit) {
  validate(circuit);
  if (circuit.num_qubits > kMaxUnitaryQubits) {
    throw TooLarge("circuit_unitary capped at " +
                   std::to_string(kMaxUnitaryQubits) + " qubits");
  }
  const std::int64_t dim = std::int64_t{1} << circuit.num_qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& g : circuit.gates) {
    u = embed_unitary(gate_unitary(g.kind), g.qubits, circuit.num_qubits) * u;
  }
  return u;
}

bool phase_equivalent(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v,
                      double tol) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw DimensionMismatch("phase_equivalent needs equal shapes");
  }
  // First maximum-modulus entry of v in row-major order fixes the scalar.
  double best = -1.0;
  std::int64_t bi = 0, bj = 0;
  for (std::int64_t i = 0; i < v.rows(); ++i) {
    for (std::int64_t j = 0; j < v.cols(); ++j) {
      const double a = std::abs(v(i, j));
      if (a > best + 1e-15) {
        best = a;
        bi = i;
        bj = j;
      }
    }
  }
  if (best <= tol) {
    return u.cwiseAbs().maxCoeff() <= tol;
  }
  Complex c = u(bi, bj) / v(bi, bj);
  const double mag = std::abs(c);
  if (mag < 1e-12) return false;
  c /= mag;  // restrict to unit scalars
  return (u - c * v).cwiseAbs().maxCoeff() <= tol;
}

std::string density_to_json(const DensityMatrix& rho) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::int64_t i = 0; i < rho.entries.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::int64_t j = 0; j < rho.entries.cols(); ++j) {
      row.push_back({rho.entries(i, j).real(), rho.entries(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows.dump();
}

DensityMatrix density_from_json(const std::string& text) {
  nlohmann::json rows;
  try {
    rows = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad density JSON: ") + e.what());
  }
  const std::int64_t n = static_cast<std::int64_t>(rows.size());
  DensityMatrix rho;
  rho.entries.resize(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    if (static_cast<std::int64_t>(rows[i].size()) != n) {
      throw DimensionMismatch("density JSON is not square");
    }
    for (std::int64_t j = 0; j < n; ++j) {
      rho.entries(i, j) = Complex{rows[i][j][0].get<double>(),
                                  rows[i][j][1].get<double>()};
    }
  }
  return rho;
}

}  // namespace qresynth
