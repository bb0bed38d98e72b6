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

#include "qresynth/transpiler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "qresynth/error.hpp"

namespace qresynth {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

GateApplication app(GateKind kind, std::initializer_list<int> qs) {
  return GateApplication{kind, std::vector<int>(qs)};
}

}  // namespace

RzAngle RzAngle::from_pi4(int units) {
  units %= 8;
  if (units > 4) units -= 8;
  if (units <= -4) units += 8;
  RzAngle a;
  a.exact = true;
  a.pi4_units = units;
  a.radians = units * (kPi / 4.0);
  return a;
}

RzAngle RzAngle::from_radians(double radians) {
  RzAngle a;
  a.exact = false;
  a.radians = wrap_angle(radians);
  return a;
}

RzAngle RzAngle::snapped(double radians) {
  const double w = wrap_angle(radians);
  const double steps = w / (kPi / 4.0);
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) * (kPi / 4.0) < 1e-9) {
    return from_pi4(static_cast<int>(rounded));
  }
  return from_radians(w);
}

bool RzAngle::is_zero_mod_2pi() const {
  if (exact) return pi4_units % 8 == 0;
  return std::abs(wrap_angle(radians)) < 1e-12;
}

PhysGate PhysGate::rz(RzAngle angle, int qubit) {
  PhysGate g;
  g.is_rz = true;
  g.angle = angle;
  g.qubits = {qubit};
  return g;
}

PhysGate PhysGate::vocab(GateKind kind, std::vector<int> qubits) {
  PhysGate g;
  g.kind = kind;
  g.qubits = std::move(qubits);
  return g;
}

PhysCircuit PhysCircuit::from_circuit(const QuantumCircuit& circuit) {
  PhysCircuit p;
  p.num_qubits = circuit.num_qubits;
  p.gates.reserve(circuit.gates.size());
  for (const auto& g : circuit.gates) {
    p.gates.push_back(PhysGate::vocab(g.kind, g.qubits));
  }
  return p;
}

Layout Layout::trivial(int num_physical) {
  Layout l;
  l.wire_to_physical.resize(static_cast<std::size_t>(num_physical));
  l.physical_to_wire.resize(static_cast<std::size_t>(num_physical));
  for (int i = 0; i < num_physical; ++i) {
    l.wire_to_physical[static_cast<std::size_t>(i)] = i;
    l.physical_to_wire[static_cast<std::size_t>(i)] = i;
  }
  return l;
}

void Layout::swap_physical(int pa, int pb) {
  const int wa = physical_to_wire[static_cast<std::size_t>(pa)];
  const int wb = physical_to_wire[static_cast<std::size_t>(pb)];
  std::swap(physical_to_wire[static_cast<std::size_t>(pa)],
            physical_to_wire[static_cast<std::size_t>(pb)]);
  wire_to_physical[static_cast<std::size_t>(wa)] = pb;
  wire_to_physical[static_cast<std::size_t>(wb)] = pa;
}

std::vector<GateApplication> decompose_2q(GateKind kind) {
  switch (kind) {
    case GateKind::cx:
      return {app(GateKind::cx, {0, 1})};
    case GateKind::cy:
      return {app(GateKind::sdg, {1}), app(GateKind::cx, {0, 1}),
              app(GateKind::s, {1})};
    case GateKind::cz:
      return {app(GateKind::h, {1}), app(GateKind::cx, {0, 1}),
              app(GateKind::h, {1})};
    case GateKind::swap:
      return {app(GateKind::cx, {0, 1}), app(GateKind::cx, {1, 0}),
              app(GateKind::cx, {0, 1})};
    case GateKind::dcx:
      return {app(GateKind::cx, {0, 1}), app(GateKind::cx, {1, 0})};
    case GateKind::iswap:
      return {app(GateKind::s, {0}),  app(GateKind::s, {1}),
              app(GateKind::h, {0}),  app(GateKind::cx, {0, 1}),
              app(GateKind::cx, {1, 0}), app(GateKind::h, {1})};
    case GateKind::cs:
      return {app(GateKind::t, {0}),   app(GateKind::cx, {0, 1}),
              app(GateKind::tdg, {1}), app(GateKind::cx, {0, 1}),
              app(GateKind::t, {1})};
    case GateKind::csdg:
      return {app(GateKind::tdg, {0}), app(GateKind::cx, {0, 1}),
              app(GateKind::t, {1}),   app(GateKind::cx, {0, 1}),
              app(GateKind::tdg, {1})};
    case GateKind::csx:
      return {app(GateKind::h, {1}),   app(GateKind::t, {0}),
              app(GateKind::cx, {0, 1}), app(GateKind::tdg, {1}),
              app(GateKind::cx, {0, 1}), app(GateKind::t, {1}),
              app(GateKind::h, {1})};
    case GateKind::ch:
      return {app(GateKind::s, {1}),   app(GateKind::h, {1}),
              app(GateKind::t, {1}),   app(GateKind::cx, {0, 1}),
              app(GateKind::tdg, {1}), app(GateKind::h, {1}),
              app(GateKind::sdg, {1})};
    case GateKind::ecr:
      return {app(GateKind::cx, {0, 1}), app(GateKind::s, {0}),
              app(GateKind::sx, {1}), app(GateKind::x, {0})};
    default:
      throw InvalidCircuit("decompose_2q needs a two-qubit kind");
  }
}

std::vector<PhysGate> lower_1q_exact(GateKind kind) {
  switch (kind) {
    case GateKind::id:
      return {};
    case GateKind::x:
      return {PhysGate::vocab(GateKind::x, {0})};
    case GateKind::sx:
      return {PhysGate::vocab(GateKind::sx, {0})};
    case GateKind::y:
      // rz(pi) after x equals Y exactly.
      return {PhysGate::vocab(GateKind::x, {0}),
              PhysGate::rz(RzAngle::from_pi4(4), 0)};
    case GateKind::z:
      return {PhysGate::rz(RzAngle::from_pi4(4), 0)};
    case GateKind::s:
      return {PhysGate::rz(RzAngle::from_pi4(2), 0)};
    case GateKind::sdg:
      return {PhysGate::rz(RzAngle::from_pi4(-2), 0)};
    case GateKind::t:
      return {PhysGate::rz(RzAngle::from_pi4(1), 0)};
    case GateKind::tdg:
      return {PhysGate::rz(RzAngle::from_pi4(-1), 0)};
    case GateKind::h:
      return {PhysGate::rz(RzAngle::from_pi4(2), 0),
              PhysGate::vocab(GateKind::sx, {0}),
              PhysGate::rz(RzAngle::from_pi4(2), 0)};
    case GateKind::sxdg:
      return {PhysGate::rz(RzAngle::from_pi4(4), 0),
              PhysGate::vocab(GateKind::sx, {0}),
              PhysGate::rz(RzAngle::from_pi4(4), 0)};
    default:
      throw InvalidCircuit("lower_1q_exact needs a single-qubit kind");
  }
}

std::vector<PhysGate> euler_1q(const Eigen::Matrix2cd& u) {
  if ((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() >
      1e-10) {
    throw NotUnitary("euler_1q input is not unitary");
  }
  // Normalize to SU(2) and read off ZYZ angles.
  const Complex det = u.determinant();
  const Complex scale = std::sqrt(det);
  Eigen::Matrix2cd su = u / scale;

  const double c = std::abs(su(0, 0));
  const double s = std::abs(su(1, 0));
  const double theta = 2.0 * std::atan2(s, c);
  double phi = 0.0, lam = 0.0;
  if (s < 1e-10) {
    phi = 2.0 * std::arg(su(1, 1));
  } else if (c < 1e-10) {
    phi = 2.0 * std::arg(su(1, 0));
  } else {
    phi = std::arg(su(1, 1)) + std::arg(su(1, 0));
    lam = std::arg(su(1, 1)) - std::arg(su(1, 0));
  }

  std::vector<PhysGate> out;
  auto push_rz = [&out](double angle) {
    const RzAngle a = RzAngle::snapped(angle);
    if (!a.is_zero_mod_2pi()) out.push_back(PhysGate::rz(a, 0));
  };
  const auto push_sx = [&out] { out.push_back(PhysGate::vocab(GateKind::sx, {0})); };

  if (std::abs(theta) < 1e-9) {
    push_rz(phi + lam);
  } else if (std::abs(theta - kPi / 2.0) < 1e-9) {
    // RZ(phi)RY(pi/2)RZ(lam) = RZ(phi+pi/2) SX RZ(lam-pi/2) up to phase.
    push_rz(lam - kPi / 2.0);
    push_sx();
    push_rz(phi + kPi / 2.0);
  } else {
    // RZ(phi)RY(theta)RZ(lam) = RZ(phi+pi) SX RZ(theta+pi) SX RZ(lam)
    // up to phase.
    push_rz(lam);
    push_sx();
    push_rz(theta + kPi);
    push_sx();
    push_rz(phi + kPi);
  }
  return out;
}

RoutedCircuit route(const PhysCircuit& circuit, const CouplingMap& map,
                    Layout initial) {
  if (circuit.num_qubits > map.num_physical()) {
    throw InvalidCircuit("circuit does not fit on the coupling map");
  }
  RoutedCircuit routed;
  routed.circuit.num_qubits = map.num_physical();
  routed.layout = std::move(initial);

  for (const auto& g : circuit.gates) {
    if (g.arity() == 1) {
      PhysGate out = g;
      out.qubits = {routed.layout.wire_to_physical[static_cast<std::size_t>(
          g.qubits[0])]};
      routed.circuit.gates.push_back(std::move(out));
      continue;
    }
    int pa = routed.layout.wire_to_physical[static_cast<std::size_t>(g.qubits[0])];
    const int pb =
        routed.layout.wire_to_physical[static_cast<std::size_t>(g.qubits[1])];
    if (!map.adjacent(pa, pb)) {
      const auto path = map.shortest_path(pa, pb);
      for (std::size_t i = 0; i + 2 < path.size(); ++i) {
        routed.circuit.gates.push_back(PhysGate::vocab(
            GateKind::swap, {path[i], path[i + 1]}));
        routed.layout.swap_physical(path[i], path[i + 1]);
        ++routed.inserted_swaps;
      }
      pa = path[path.size() - 2];
    }
    PhysGate out = g;
    out.qubits = {pa, pb};
    routed.circuit.gates.push_back(std::move(out));
  }
  return routed;
}

PhysCircuit expand_swaps(const PhysCircuit& circuit) {
  PhysCircuit out;
  out.num_qubits = circuit.num_qubits;
  for (const auto& g : circuit.gates) {
    if (!g.is_rz && g.kind == GateKind::swap) {
      const int a = g.qubits[0], b = g.qubits[1];
      out.gates.push_back(PhysGate::vocab(GateKind::cx, {a, b}));
      out.gates.push_back(PhysGate::vocab(GateKind::cx, {b, a}));
      out.gates.push_back(PhysGate::vocab(GateKind::cx, {a, b}));
    } else {
      out.gates.push_back(g);
    }
  }
  return out;
}

namespace {

bool is_identity_gate(const PhysGate& g) {
  if (g.is_rz) return g.angle.is_zero_mod_2pi();
  return g.kind == GateKind::id;
}

bool operands_equal_unordered(const PhysGate& a, const PhysGate& b) {
  return (a.qubits[0] == b.qubits[0] && a.qubits[1] == b.qubits[1]) ||
         (a.qubits[0] == b.qubits[1] && a.qubits[1] == b.qubits[0]);
}

// Adjacent inverse-pair table; assumes b follows a with no interposed gate
// touching their operands.
bool cancels(const PhysGate& a, const PhysGate& b) {
  if (a.is_rz && b.is_rz) {
    if (a.qubits[0] != b.qubits[0]) return false;
    if (a.angle.exact && b.angle.exact) {
      return (a.angle.pi4_units + b.angle.pi4_units) % 8 == 0;
    }
    return std::abs(wrap_angle(a.angle.radians + b.angle.radians)) < 1e-12;
  }
  if (a.is_rz || b.is_rz) return false;

  const GateKind ka = a.kind, kb = b.kind;
  auto pair_is = [&](GateKind x, GateKind y) {
    return (ka == x && kb == y) || (ka == y && kb == x);
  };

  if (gate_arity(ka) == 1 && gate_arity(kb) == 1) {
    if (a.qubits[0] != b.qubits[0]) return false;
    if (ka == kb && (ka == GateKind::x || ka == GateKind::y ||
                     ka == GateKind::z || ka == GateKind::h)) {
      return true;
    }
    return pair_is(GateKind::s, GateKind::sdg) ||
           pair_is(GateKind::t, GateKind::tdg) ||
           pair_is(GateKind::sx, GateKind::sxdg);
  }
  if (gate_arity(ka) == 2 && gate_arity(kb) == 2) {
    if (ka == kb && (ka == GateKind::cx || ka == GateKind::cy ||
                     ka == GateKind::ch)) {
      return a.qubits == b.qubits;
    }
    if (ka == kb && (ka == GateKind::cz || ka == GateKind::swap)) {
      return operands_equal_unordered(a, b);
    }
    if (ka == GateKind::dcx && kb == GateKind::dcx) {
      // dcx(a,b) then dcx(b,a) is the identity.
      return a.qubits[0] == b.qubits[1] && a.qubits[1] == b.qubits[0];
    }
    if (pair_is(GateKind::cs, GateKind::csdg)) {
      return operands_equal_unordered(a, b);
    }
  }
  return false;
}

PhysCircuit peephole_pass(const PhysCircuit& circuit, bool* changed) {
  std::vector<PhysGate> kept;
  std::vector<char> alive;
  std::vector<std::vector<int>> stack(
      static_cast<std::size_t>(circuit.num_qubits));
  auto top_of = [&](int q) -> int {
    auto& st = stack[static_cast<std::size_t>(q)];
    while (!st.empty() && !alive[static_cast<std::size_t>(st.back())]) {
      st.pop_back();
    }
    return st.empty() ? -1 : st.back();
  };

  for (const auto& g : circuit.gates) {
    if (is_identity_gate(g)) {
      *changed = true;
      continue;
    }
    int prev = top_of(g.qubits[0]);
    bool same = prev >= 0;
    for (std::size_t i = 1; same && i < g.qubits.size(); ++i) {
      same = top_of(g.qubits[static_cast<std::size_t>(i)]) == prev;
    }
    if (same && static_cast<int>(kept[static_cast<std::size_t>(prev)]
                                     .qubits.size()) ==
                    static_cast<int>(g.qubits.size()) &&
        cancels(kept[static_cast<std::size_t>(prev)], g)) {
      alive[static_cast<std::size_t>(prev)] = 0;
      *changed = true;
      continue;
    }
    const int idx = static_cast<int>(kept.size());
    kept.push_back(g);
    alive.push_back(1);
    for (int q : kept.back().qubits) {
      stack[static_cast<std::size_t>(q)].push_back(idx);
    }
  }

  PhysCircuit out;
  out.num_qubits = circuit.num_qubits;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (alive[i]) out.gates.push_back(std::move(kept[i]));
  }
  return out;
}

}  // namespace

PhysCircuit peephole(const PhysCircuit& circuit) {
  PhysCircuit cur = circuit;
  bool changed = true;
  while (changed) {
    changed = false;
    cur = peephole_pass(cur, &changed);
  }
  return cur;
}

QuantumCircuit peephole(const QuantumCircuit& circuit) {
  validate(circuit);
  const PhysCircuit reduced = peephole(PhysCircuit::from_circuit(circuit));
  QuantumCircuit out;
  out.num_qubits = circuit.num_qubits;
  for (const auto& g : reduced.gates) {
    out.gates.push_back({g.kind, g.qubits});
  }
  return out;
}

namespace {

// Lowers 1-qubit vocabulary gates to the {rz, sx, x} basis. At opt 1 maximal
// runs on a wire are fused into one matrix and resynthesized.
PhysCircuit lower_1q(const PhysCircuit& circuit, bool fuse_runs) {
  PhysCircuit out;
  out.num_qubits = circuit.num_qubits;

  auto emit_single = [&out](const PhysGate& g) {
    if (g.is_rz) {
      out.gates.push_back(g);
      return;
    }
    for (const auto& lowered : lower_1q_exact(g.kind)) {
      PhysGate placed = lowered;
      placed.qubits = {g.qubits[0]};
      out.gates.push_back(std::move(placed));
    }
  };

  if (!fuse_runs) {
    for (const auto& g : circuit.gates) {
      if (g.arity() == 1) {
        emit_single(g);
      } else {
        out.gates.push_back(g);
      }
    }
    return out;
  }

  // pending[q]: run of 1q gates on wire q awaiting fusion.
  std::vector<std::vector<PhysGate>> pending(
      static_cast<std::size_t>(circuit.num_qubits));
  auto flush = [&](int q) {
    auto& run = pending[static_cast<std::size_t>(q)];
    if (run.empty()) return;
    if (run.size() == 1) {
      emit_single(run[0]);
    } else {
      Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
      for (const auto& g : run) {
        const Eigen::Matrix2cd m = g.is_rz ? rz_matrix(g.angle.value())
                                           : Eigen::Matrix2cd(gate_unitary(g.kind));
        u = m * u;
      }
      for (const auto& lowered : euler_1q(u)) {
        PhysGate placed = lowered;
        placed.qubits = {q};
        out.gates.push_back(std::move(placed));
      }
    }
    run.clear();
  };

  for (const auto& g : circuit.gates) {
    if (g.arity() == 1) {
      pending[static_cast<std::size_t>(g.qubits[0])].push_back(g);
    } else {
      flush(g.qubits[0]);
      flush(g.qubits[1]);
      out.gates.push_back(g);
    }
  }
  for (int q = 0; q < circuit.num_qubits; ++q) flush(q);
  return out;
}

template <typename Circuit>
int depth_impl(const Circuit& circuit) {
  std::vector<int> frontier(static_cast<std::size_t>(circuit.num_qubits), 0);
  int total = 0;
  for (const auto& g : circuit.gates) {
    int level = 0;
    for (int q : g.qubits) {
      level = std::max(level, frontier[static_cast<std::size_t>(q)]);
    }
    ++level;
    for (int q : g.qubits) frontier[static_cast<std::size_t>(q)] = level;
    total = std::max(total, level);
  }
  return total;
}

}  // namespace

TranspiledCircuit transpile(const QuantumCircuit& circuit,
                            const CouplingMap& map, int opt_level) {
  validate(circuit);
  if (opt_level != 0 && opt_level != 1) {
    throw InvalidCircuit("opt level must be 0 or 1");
  }

  // 1. Lower two-qubit kinds to cx + 1q vocabulary gates.
  PhysCircuit lowered;
  lowered.num_qubits = circuit.num_qubits;
  for (const auto& g : circuit.gates) {
    if (gate_arity(g.kind) == 1) {
      lowered.gates.push_back(PhysGate::vocab(g.kind, g.qubits));
      continue;
    }
    for (const auto& part : decompose_2q(g.kind)) {
      std::vector<int> qs;
      for (int t : part.qubits) {
        qs.push_back(g.qubits[static_cast<std::size_t>(t)]);
      }
      lowered.gates.push_back(PhysGate::vocab(part.kind, std::move(qs)));
    }
  }

  // 2. Route onto the coupling map, then expand inserted swaps.
  RoutedCircuit routed = route(lowered, map, Layout::trivial(map.num_physical()));
  PhysCircuit expanded = expand_swaps(routed.circuit);

  // 3. Lower 1q gates to the basis; fuse runs at opt 1.
  PhysCircuit basis = lower_1q(expanded, opt_level == 1);

  // 4. Peephole at opt 1.
  if (opt_level == 1) basis = peephole(basis);

  TranspiledCircuit t;
  t.circuit = std::move(basis);
  t.final_layout = routed.layout.wire_to_physical;
  t.source_gate_count = static_cast<int>(circuit.gates.size());
  t.transpiled_gate_count = static_cast<int>(t.circuit.gates.size());
  t.depth = depth(t.circuit);
  return t;
}

int gate_count(const QuantumCircuit& circuit) {
  return static_cast<int>(circuit.gates.size());
}
int gate_count(const PhysCircuit& circuit) {
  return static_cast<int>(circuit.gates.size());
}
int depth(const QuantumCircuit& circuit) { return depth_impl(circuit); }
int depth(const PhysCircuit& circuit) { return depth_impl(circuit); }

double reduction_pct(int original, int reduced) {
  if (original <= 0) throw ZeroOriginal("reduction needs a positive original");
  return 100.0 * static_cast<double>(original - reduced) /
         static_cast<double>(original);
}

Eigen::Matrix2cd rz_matrix(double angle) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::exp(Complex{0.0, -angle / 2.0});
  m(1, 1) = std::exp(Complex{0.0, angle / 2.0});
  return m;
}

Eigen::MatrixXcd phys_gate_unitary(const PhysGate& gate) {
  if (gate.is_rz) return rz_matrix(gate.angle.value());
  return gate_unitary(gate.kind);
}

StateVector simulate(const PhysCircuit& circuit) {
  StateVector s = zero_state(circuit.num_qubits);
  for (const auto& g : circuit.gates) {
    apply_unitary_in_place(s, phys_gate_unitary(g), g.qubits);
  }
  return s;
}

DensityMatrix transpiled_logical_density(const TranspiledCircuit& transpiled,
                                         int num_logical) {
  const int p = transpiled.circuit.num_qubits;
  if (num_logical > p) throw DimensionMismatch("more logical wires than physical");
  const StateVector phys = simulate(transpiled.circuit);

  // Undo the final permutation: wire w lives at physical final_layout[w].
  const auto& w2p = transpiled.final_layout;
  const std::int64_t dim = std::int64_t{1} << p;
  Eigen::VectorXcd wire_ordered(dim);
  for (std::int64_t iw = 0; iw < dim; ++iw) {
    std::int64_t ip = 0;
    for (int w = 0; w < p; ++w) {
      if (iw & (std::int64_t{1} << (p - 1 - w))) {
        ip |= std::int64_t{1} << (p - 1 - w2p[static_cast<std::size_t>(w)]);
      }
    }
    wire_ordered[iw] = phys.amps[ip];
  }

  // Padding wires stay |0>, so the logical amplitudes sit at stride 2^(p-n).
  const int pad = p - num_logical;
  StateVector logical;
  logical.num_qubits = num_logical;
  logical.amps.resize(std::int64_t{1} << num_logical);
  for (std::int64_t i = 0; i < logical.amps.size(); ++i) {
    logical.amps[i] = wire_ordered[i << pad];
  }
  return density_matrix(logical);
}

std::string transpile_report_json(const TranspiledCircuit& transpiled,
                                  int num_logical) {
  nlohmann::ordered_json j;
  j["source_gate_count"] = transpiled.source_gate_count;
  j["transpiled_gate_count"] = transpiled.transpiled_gate_count;
  j["depth"] = transpiled.depth;
  j["final_layout"] = std::vector<int>(
      transpiled.final_layout.begin(),
      transpiled.final_layout.begin() + num_logical);
  return j.dump();
}

}  // namespace qresynth
