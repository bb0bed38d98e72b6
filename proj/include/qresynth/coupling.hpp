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
#include <utility>
#include <vector>

namespace qresynth {

/// Undirected connectivity graph of physical qubits. Construction rejects
/// self-loops and disconnected graphs.
class CouplingMap {
 public:
  CouplingMap(int num_physical, std::vector<std::pair<int, int>> edges);

  int num_physical() const { return num_physical_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int q) const {
    return neighbors_[static_cast<std::size_t>(q)];
  }
  bool adjacent(int a, int b) const;

  /// Shortest path from a to b (inclusive); among equal-length paths the one
  /// preferring lowest physical indices. Throws DisconnectedMap if none.
  std::vector<int> shortest_path(int a, int b) const;

  static CouplingMap line(int n);
  static CouplingMap ring(int n);
  /// All-to-all connectivity.
  static CouplingMap complete(int n);
  /// 12-qubit sample with heavy-hex-like mixed degree-2/3 connectivity.
  static CouplingMap hex12();

  /// Resolves "line-N", "ring-N", "full-N", "hex-12", or "@file.json".
  /// The bare family names "line" / "ring" / "full" size themselves to
  /// fallback_qubits.
  static CouplingMap from_spec(const std::string& spec, int fallback_qubits);

  std::string to_json() const;
  static CouplingMap from_json(const std::string& text);
  static CouplingMap load_json(const std::string& path);

 private:
  int num_physical_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> neighbors_;
};

}  // namespace qresynth
