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
#include <optional>
#include <string_view>

namespace qresynth {

/// Closed gate vocabulary: 11 single-qubit and 11 two-qubit kinds.
/// For controlled kinds, operand 0 is the control and operand 1 the target.
enum class GateKind : int {
  x = 0,
  y,
  z,
  h,
  s,
  t,
  id,
  sxdg,
  sdg,
  sx,
  tdg,
  cx,
  cy,
  cz,
  swap,
  dcx,
  iswap,
  csdg,
  ecr,
  ch,
  cs,
  csx,
};

inline constexpr int kGateKindCount = 22;
inline constexpr int kSingleQubitKinds = 11;

constexpr int gate_arity(GateKind k) {
  return static_cast<int>(k) < kSingleQubitKinds ? 1 : 2;
}

constexpr bool is_two_qubit(GateKind k) { return gate_arity(k) == 2; }

std::string_view gate_name(GateKind k);
std::optional<GateKind> gate_from_name(std::string_view name);

/// Defining unitary of the gate in the big-endian operand convention:
/// operand 0 is the most significant bit of the matrix index, so controlled
/// gates have the block form [[I, 0], [0, V]].
const Eigen::MatrixXcd& gate_unitary(GateKind k);

}  // namespace qresynth
