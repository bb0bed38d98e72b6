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

#include "qresynth/dag.hpp"

#include <algorithm>
#include <queue>

#include <nlohmann/json.hpp>

#include "qresynth/error.hpp"

namespace qresynth {

namespace {

int node_port_count(const CircuitDag& dag, int node, int num_qubits) {
  const auto& n = dag.nodes[static_cast<std::size_t>(node)];
  switch (n.type) {
    case DagNodeType::start:
    case DagNodeType::end:
      return num_qubits;
    case DagNodeType::gate:
      return gate_arity(n.kind);
  }
  return 0;
}

}  // namespace

int dag_num_qubits(const CircuitDag& dag) {
  int n = 0;
  for (const auto& e : dag.edges) {
    if (e.src == 0) ++n;
  }
  return n;
}

int node_type_id(const DagNode& node) {
  switch (node.type) {
    case DagNodeType::start:
      return kStartTypeId;
    case DagNodeType::end:
      return kEndTypeId;
    case DagNodeType::gate:
      return static_cast<int>(node.kind);
  }
  return -1;
}

std::vector<int> topological_order(const CircuitDag& dag) {
  const int n = static_cast<int>(dag.nodes.size());
  std::vector<int> in_degree(n, 0);
  std::vector<std::vector<int>> succ(n);
  for (const auto& e : dag.edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw InvalidDag("edge references a node that does not exist");
    }
    ++in_degree[e.dst];
    succ[e.src].push_back(e.dst);
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < n; ++v) {
    if (in_degree[v] == 0) ready.push(v);
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int w : succ[v]) {
      if (--in_degree[w] == 0) ready.push(w);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    throw CycleDetected("dag contains a cycle");
  }
  return order;
}

void validate_dag(const CircuitDag& dag) {
  const int n = static_cast<int>(dag.nodes.size());
  if (n < 2) throw InvalidDag("dag needs at least start and end nodes");
  if (dag.nodes.front().type != DagNodeType::start) {
    throw InvalidDag("node 0 must be the start node");
  }
  if (dag.nodes.back().type != DagNodeType::end) {
    throw InvalidDag("last node must be the end node");
  }
  for (int v = 1; v + 1 < n; ++v) {
    if (dag.nodes[static_cast<std::size_t>(v)].type != DagNodeType::gate) {
      throw InvalidDag("interior node " + std::to_string(v) +
                       " is not a gate node");
    }
  }

  const int num_qubits = dag_num_qubits(dag);
  if (num_qubits < 1) throw InvalidDag("start node has no output ports");

  // Each output port feeds exactly one input port and vice versa.
  std::vector<std::vector<int>> out_used(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> in_used(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const int ports = node_port_count(dag, v, num_qubits);
    out_used[static_cast<std::size_t>(v)].assign(
        static_cast<std::size_t>(ports), 0);
    in_used[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(ports),
                                                0);
  }
  for (const auto& e : dag.edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw InvalidDag("edge references a node that does not exist");
    }
    auto& outs = out_used[static_cast<std::size_t>(e.src)];
    auto& ins = in_used[static_cast<std::size_t>(e.dst)];
    if (e.src_port < 0 || e.src_port >= static_cast<int>(outs.size())) {
      throw InvalidDag("edge uses source port out of range");
    }
    if (e.dst_port < 0 || e.dst_port >= static_cast<int>(ins.size())) {
      throw InvalidDag("edge uses destination port out of range");
    }
    if (++outs[static_cast<std::size_t>(e.src_port)] > 1) {
      throw InvalidDag("output port of node " + std::to_string(e.src) +
                       " used more than once");
    }
    if (++ins[static_cast<std::size_t>(e.dst_port)] > 1) {
      throw InvalidDag("input port of node " + std::to_string(e.dst) +
                       " used more than once");
    }
  }
  for (int v = 0; v < n; ++v) {
    const auto& node = dag.nodes[static_cast<std::size_t>(v)];
    const auto& outs = out_used[static_cast<std::size_t>(v)];
    const auto& ins = in_used[static_cast<std::size_t>(v)];
    const bool wants_in = node.type != DagNodeType::start;
    const bool wants_out = node.type != DagNodeType::end;
    for (std::size_t p = 0; p < outs.size(); ++p) {
      if (wants_out && outs[p] == 0) {
        throw InvalidDag("dangling output port " + std::to_string(p) +
                         " on node " + std::to_string(v));
      }
      if (!wants_out && outs[p] != 0) {
        throw InvalidDag("end node has an output edge");
      }
    }
    for (std::size_t p = 0; p < ins.size(); ++p) {
      if (wants_in && ins[p] == 0) {
        throw InvalidDag("dangling input port " + std::to_string(p) +
                         " on node " + std::to_string(v));
      }
      if (!wants_in && ins[p] != 0) {
        throw InvalidDag("start node has an input edge");
      }
    }
  }

  topological_order(dag);  // throws CycleDetected on cycles

  // Wire labels must cover each qubit exactly once at every prefix; tracing
  // them also catches label duplication from malformed wiring.
  edge_wire_labels(dag);
}

CircuitDag circuit_to_dag(const QuantumCircuit& circuit) {
  validate(circuit);
  CircuitDag dag;
  dag.nodes.push_back({DagNodeType::start, GateKind::x});
  struct Dangling {
    int node;
    int port;
  };
  std::vector<Dangling> dangling(static_cast<std::size_t>(circuit.num_qubits));
  for (int q = 0; q < circuit.num_qubits; ++q) dangling[q] = {0, q};

  for (const auto& g : circuit.gates) {
    const int node = static_cast<int>(dag.nodes.size());
    dag.nodes.push_back({DagNodeType::gate, g.kind});
    for (int port = 0; port < static_cast<int>(g.qubits.size()); ++port) {
      const int q = g.qubits[static_cast<std::size_t>(port)];
      const auto& d = dangling[static_cast<std::size_t>(q)];
      dag.edges.push_back({d.node, d.port, node, port});
      dangling[static_cast<std::size_t>(q)] = {node, port};
    }
  }

  const int end = static_cast<int>(dag.nodes.size());
  dag.nodes.push_back({DagNodeType::end, GateKind::x});
  for (int q = 0; q < circuit.num_qubits; ++q) {
    const auto& d = dangling[static_cast<std::size_t>(q)];
    dag.edges.push_back({d.node, d.port, end, q});
  }
  return dag;
}

std::vector<int> edge_wire_labels(const CircuitDag& dag) {
  const int num_qubits = dag_num_qubits(dag);
  std::vector<int> labels(dag.edges.size(), -1);
  // in_label[v][p]: label entering node v on input port p.
  std::vector<std::vector<int>> in_label(dag.nodes.size());
  for (std::size_t v = 0; v < dag.nodes.size(); ++v) {
    const int ports = node_port_count(dag, static_cast<int>(v), num_qubits);
    in_label[v].assign(static_cast<std::size_t>(ports), -1);
  }
  std::vector<std::vector<int>> out_edges(dag.nodes.size());
  for (std::size_t e = 0; e < dag.edges.size(); ++e) {
    out_edges[static_cast<std::size_t>(dag.edges[e].src)].push_back(
        static_cast<int>(e));
  }

  for (int v : topological_order(dag)) {
    const auto& node = dag.nodes[static_cast<std::size_t>(v)];
    for (int ei : out_edges[static_cast<std::size_t>(v)]) {
      const auto& e = dag.edges[static_cast<std::size_t>(ei)];
      if (e.src_port < 0 || e.dst_port < 0 ||
          e.src_port >= node_port_count(dag, e.src, num_qubits) ||
          e.dst_port >= node_port_count(dag, e.dst, num_qubits)) {
        throw InvalidDag("edge port out of range");
      }
      int label;
      if (node.type == DagNodeType::start) {
        label = e.src_port;
      } else {
        label = in_label[static_cast<std::size_t>(v)]
                        [static_cast<std::size_t>(e.src_port)];
        if (label < 0) {
          throw InvalidDag("gate output port has no matching input wire");
        }
      }
      labels[static_cast<std::size_t>(ei)] = label;
      auto& slot = in_label[static_cast<std::size_t>(e.dst)]
                           [static_cast<std::size_t>(e.dst_port)];
      if (slot != -1) throw InvalidDag("input port receives two wires");
      slot = label;
    }
  }

  // The end node must see each qubit exactly once.
  std::vector<int> seen(static_cast<std::size_t>(num_qubits), 0);
  for (int label : in_label.back()) {
    if (label < 0 || label >= num_qubits || seen[static_cast<std::size_t>(label)]++) {
      throw InvalidDag("wire labels at the end node do not cover each qubit once");
    }
  }
  return labels;
}

QuantumCircuit dag_to_circuit(const CircuitDag& dag) {
  validate_dag(dag);
  const auto labels = edge_wire_labels(dag);
  QuantumCircuit c;
  c.num_qubits = dag_num_qubits(dag);

  // label entering each node, per input port.
  std::vector<std::vector<int>> in_label(dag.nodes.size());
  for (std::size_t e = 0; e < dag.edges.size(); ++e) {
    const auto& edge = dag.edges[e];
    auto& lab = in_label[static_cast<std::size_t>(edge.dst)];
    if (static_cast<int>(lab.size()) <= edge.dst_port) {
      lab.resize(static_cast<std::size_t>(edge.dst_port) + 1, -1);
    }
    lab[static_cast<std::size_t>(edge.dst_port)] =
        labels[static_cast<std::size_t>(e)];
  }

  for (int v : topological_order(dag)) {
    const auto& node = dag.nodes[static_cast<std::size_t>(v)];
    if (node.type != DagNodeType::gate) continue;
    GateApplication g{node.kind, in_label[static_cast<std::size_t>(v)]};
    c.gates.push_back(std::move(g));
  }
  validate(c);
  return c;
}

DagAdjacency build_adjacency(const CircuitDag& dag) {
  DagAdjacency adj;
  adj.in_edges.resize(dag.nodes.size());
  adj.out_edges.resize(dag.nodes.size());
  for (std::size_t e = 0; e < dag.edges.size(); ++e) {
    adj.in_edges[static_cast<std::size_t>(dag.edges[e].dst)].push_back(
        static_cast<int>(e));
    adj.out_edges[static_cast<std::size_t>(dag.edges[e].src)].push_back(
        static_cast<int>(e));
  }
  for (auto& v : adj.in_edges) {
    std::sort(v.begin(), v.end(), [&dag](int a, int b) {
      return dag.edges[static_cast<std::size_t>(a)].dst_port <
             dag.edges[static_cast<std::size_t>(b)].dst_port;
    });
  }
  for (auto& v : adj.out_edges) {
    std::sort(v.begin(), v.end(), [&dag](int a, int b) {
      return dag.edges[static_cast<std::size_t>(a)].src_port <
             dag.edges[static_cast<std::size_t>(b)].src_port;
    });
  }
  return adj;
}

std::string dag_to_json(const CircuitDag& dag) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : dag.nodes) {
    std::string type;
    switch (n.type) {
      case DagNodeType::start:
        type = "start";
        break;
      case DagNodeType::end:
        type = "end";
        break;
      case DagNodeType::gate:
        type = std::string(gate_name(n.kind));
        break;
    }
    j["nodes"].push_back({{"type", type}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : dag.edges) {
    j["edges"].push_back({e.src, e.src_port, e.dst, e.dst_port});
  }
  return j.dump();
}

CircuitDag dag_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidDag(std::string("bad dag JSON: ") + e.what());
  }
  CircuitDag dag;
  for (const auto& jn : j.at("nodes")) {
    const auto type = jn.at("type").get<std::string>();
    if (type == "start") {
      dag.nodes.push_back({DagNodeType::start, GateKind::x});
    } else if (type == "end") {
      dag.nodes.push_back({DagNodeType::end, GateKind::x});
    } else {
      const auto kind = gate_from_name(type);
      if (!kind) throw InvalidDag("unknown node type in JSON: " + type);
      dag.nodes.push_back({DagNodeType::gate, *kind});
    }
  }
  for (const auto& je : j.at("edges")) {
    if (!je.is_array() || je.size() != 4) {
      throw InvalidDag("dag JSON edge must be a 4-tuple");
    }
    dag.edges.push_back(
        {je[0].get<int>(), je[1].get<int>(), je[2].get<int>(), je[3].get<int>()});
  }
  return dag;
}

}  // namespace qresynth
