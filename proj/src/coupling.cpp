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

#include "qresynth/coupling.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qresynth/error.hpp"

namespace qresynth {

CouplingMap::CouplingMap(int num_physical,
                         std::vector<std::pair<int, int>> edges)
    : num_physical_(num_physical) {
  if (num_physical < 1) throw DisconnectedMap("coupling map needs qubits");
  neighbors_.resize(static_cast<std::size_t>(num_physical));
  for (auto [a, b] : edges) {
    if (a == b) throw DisconnectedMap("coupling map has a self-loop");
    if (a < 0 || b < 0 || a >= num_physical || b >= num_physical) {
      throw DisconnectedMap("coupling map edge out of range");
    }
    if (a > b) std::swap(a, b);
    edges_.emplace_back(a, b);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [a, b] : edges_) {
    neighbors_[static_cast<std::size_t>(a)].push_back(b);
    neighbors_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());

  if (num_physical > 1) {
    std::vector<char> seen(static_cast<std::size_t>(num_physical), 0);
    std::deque<int> frontier{0};
    seen[0] = 1;
    int count = 1;
    while (!frontier.empty()) {
      const int v = frontier.front();
      frontier.pop_front();
      for (int w : neighbors_[static_cast<std::size_t>(v)]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++count;
          frontier.push_back(w);
        }
      }
    }
    if (count != num_physical) {
      throw DisconnectedMap("coupling map is not connected");
    }
  }
}

bool CouplingMap::adjacent(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), std::pair{a, b});
}

std::vector<int> CouplingMap::shortest_path(int a, int b) const {
  if (a < 0 || b < 0 || a >= num_physical_ || b >= num_physical_) {
    throw DisconnectedMap("path endpoint out of range");
  }
  if (a == b) return {a};
  // Distances measured from the target, then a greedy descent from the
  // source picking the lowest-index neighbor each step.
  std::vector<int> dist(static_cast<std::size_t>(num_physical_), -1);
  std::deque<int> frontier{b};
  dist[static_cast<std::size_t>(b)] = 0;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop_front();
    for (int w : neighbors_[static_cast<std::size_t>(v)]) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        frontier.push_back(w);
      }
    }
  }
  if (dist[static_cast<std::size_t>(a)] < 0) {
    throw DisconnectedMap("no path between physical qubits");
  }
  std::vector<int> path{a};
  int cur = a;
  while (cur != b) {
    for (int w : neighbors_[static_cast<std::size_t>(cur)]) {
      if (dist[static_cast<std::size_t>(w)] ==
          dist[static_cast<std::size_t>(cur)] - 1) {
        path.push_back(w);
        cur = w;
        break;
      }
    }
  }
  return path;
}

CouplingMap CouplingMap::line(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return CouplingMap(n, std::move(edges));
}

CouplingMap CouplingMap::ring(int n) {
  if (n < 3) return line(n);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return CouplingMap(n, std::move(edges));
}

CouplingMap CouplingMap::complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return CouplingMap(n, std::move(edges));
}

CouplingMap CouplingMap::hex12() {
  // 9-cycle with three spur qubits, giving the degree-2/3 mix of a
  // heavy-hex tile.
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 9; ++i) edges.emplace_back(i, (i + 1) % 9);
  edges.emplace_back(1, 9);
  edges.emplace_back(4, 10);
  edges.emplace_back(7, 11);
  return CouplingMap(12, std::move(edges));
}

CouplingMap CouplingMap::from_spec(const std::string& spec,
                                   int fallback_qubits) {
  if (!spec.empty() && spec.front() == '@') {
    return load_json(spec.substr(1));
  }
  std::string family = spec;
  int n = fallback_qubits;
  if (const auto dash = spec.rfind('-'); dash != std::string::npos) {
    family = spec.substr(0, dash);
    try {
      n = std::stoi(spec.substr(dash + 1));
    } catch (const std::exception&) {
      throw DisconnectedMap("bad coupling map spec: " + spec);
    }
  }
  if (family == "line") return line(n);
  if (family == "ring") return ring(n);
  if (family == "full") return complete(n);
  if (family == "hex") return hex12();
  throw DisconnectedMap("unknown coupling map spec: " + spec);
}

std::string CouplingMap::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = num_physical_;
  j["edges"] = nlohmann::ordered_json::array();
  for (auto [a, b] : edges_) j["edges"].push_back({a, b});
  return j.dump();
}

CouplingMap CouplingMap::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad coupling map JSON: ") + e.what());
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& je : j.at("edges")) {
    edges.emplace_back(je[0].get<int>(), je[1].get<int>());
  }
  return CouplingMap(j.at("n").get<int>(), std::move(edges));
}

CouplingMap CouplingMap::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open coupling map file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace qresynth
