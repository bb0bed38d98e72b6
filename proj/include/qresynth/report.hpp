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

#include "qresynth/bench.hpp"

namespace qresynth {

struct FiveNumber {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};
/// Linear-interpolation quantile over a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double p);
FiveNumber five_number(std::vector<double> values);

struct SizeSummary {
  std::string variant;
  int qubits = 0;
  int gates = 0;
  std::size_t n = 0;
  double gate_mean = 0;
  FiveNumber gate_box;
  double depth_mean = 0;
  FiveNumber depth_box;
  double mse_mean = 0;
};

struct GateCountSummary {
  std::string variant;
  int gates = 0;
  std::size_t n = 0;
  double gate_mean = 0;
};

struct VariantSummary {
  std::string variant;
  std::size_t n = 0;
  double gate_mean = 0;
  double depth_mean = 0;
  double mse_mean = 0;
};

std::vector<SizeSummary> summarize_by_size(const std::vector<ResultRow>& rows);
std::vector<GateCountSummary> summarize_by_gate_count(
    const std::vector<ResultRow>& rows);
std::vector<VariantSummary> summarize_by_variant(
    const std::vector<ResultRow>& rows);

void write_boxplot_svg(const std::string& path, const std::string& title,
                       const std::vector<std::string>& labels,
                       const std::vector<FiveNumber>& boxes);

}  // namespace qresynth
