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

#include "qresynth/gate.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace qresynth {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

constexpr std::array<std::string_view, kGateKindCount> kNames = {
    "x",    "y",   "z",     "h",    "s",  "t",  "id", "sxdg",
    "sdg",  "sx",  "tdg",   "cx",   "cy", "cz", "swap",
    "dcx",  "iswap", "csdg", "ecr",  "ch", "cs", "csx"};

Eigen::Matrix2cd m2(Complex a, Complex b, Complex c, Complex d) {
  Eigen::Matrix2cd m;
  m << a, b, c, d;
  return m;
}

// [[I, 0], [0, V]] in the control-major basis ordering.
Eigen::Matrix4cd controlled(const Eigen::Matrix2cd& v) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m.block<2, 2>(2, 2) = v;
  return m;
}

struct GateTable {
  std::array<Eigen::MatrixXcd, kGateKindCount> u;

  GateTable() {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const Complex e_ipi4 = std::exp(kI * (std::numbers::pi / 4.0));

    const Eigen::Matrix2cd X = m2(0, 1, 1, 0);
    const Eigen::Matrix2cd Y = m2(0, -kI, kI, 0);
    const Eigen::Matrix2cd Z = m2(1, 0, 0, -1);
    const Eigen::Matrix2cd H =
        m2(inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2);
    const Eigen::Matrix2cd S = m2(1, 0, 0, kI);
    const Eigen::Matrix2cd T = m2(1, 0, 0, e_ipi4);
    const Eigen::Matrix2cd SX = 0.5 * m2(1.0 + kI, 1.0 - kI, 1.0 - kI, 1.0 + kI);

    u[static_cast<int>(GateKind::x)] = X;
    u[static_cast<int>(GateKind::y)] = Y;
    u[static_cast<int>(GateKind::z)] = Z;
    u[static_cast<int>(GateKind::h)] = H;
    u[static_cast<int>(GateKind::s)] = S;
    u[static_cast<int>(GateKind::t)] = T;
    u[static_cast<int>(GateKind::id)] = Eigen::Matrix2cd::Identity();
    u[static_cast<int>(GateKind::sxdg)] = SX.adjoint();
    u[static_cast<int>(GateKind::sdg)] = S.adjoint();
    u[static_cast<int>(GateKind::sx)] = SX;
    u[static_cast<int>(GateKind::tdg)] = T.adjoint();

    u[static_cast<int>(GateKind::cx)] = controlled(X);
    u[static_cast<int>(GateKind::cy)] = controlled(Y);
    u[static_cast<int>(GateKind::cz)] = controlled(Z);
    u[static_cast<int>(GateKind::ch)] = controlled(H);
    u[static_cast<int>(GateKind::cs)] = controlled(S);
    u[static_cast<int>(GateKind::csdg)] = controlled(Eigen::Matrix2cd(S.adjoint()));
    u[static_cast<int>(GateKind::csx)] = controlled(SX);

    Eigen::Matrix4cd swap;
    swap << 1, 0, 0, 0,
            0, 0, 1, 0,
            0, 1, 0, 0,
            0, 0, 0, 1;
    u[static_cast<int>(GateKind::swap)] = swap;

    // dcx(a, b) is cx(a, b) followed by cx(b, a): |a b> -> |b, a xor b>.
    Eigen::Matrix4cd dcx = Eigen::Matrix4cd::Zero();
    dcx(0, 0) = 1;
    dcx(3, 1) = 1;
    dcx(1, 2) = 1;
    dcx(2, 3) = 1;
    u[static_cast<int>(GateKind::dcx)] = dcx;

    Eigen::Matrix4cd iswap;
    iswap << 1, 0, 0, 0,
             0, 0, kI, 0,
             0, kI, 0, 0,
             0, 0, 0, 1;
    u[static_cast<int>(GateKind::iswap)] = iswap;

    // Echoed cross-resonance, converted from the published little-endian
    // matrix into the operand-0-major ordering used here.
    Eigen::Matrix4cd ecr;
    ecr << 0, 0, 1, kI,
           0, 0, kI, 1,
           1, -kI, 0, 0,
           -kI, 1, 0, 0;
    u[static_cast<int>(GateKind::ecr)] = inv_sqrt2 * ecr;
  }
};

const GateTable& table() {
  static const GateTable t;
  return t;
}

}  // namespace

std::string_view gate_name(GateKind k) { return kNames[static_cast<int>(k)]; }

std::optional<GateKind> gate_from_name(std::string_view name) {
  for (int i = 0; i < kGateKindCount; ++i) {
    if (kNames[i] == name) return static_cast<GateKind>(i);
  }
  return std::nullopt;
}

const Eigen::MatrixXcd& gate_unitary(GateKind k) {
  return table().u[static_cast<int>(k)];
}

}  // namespace qresynth
