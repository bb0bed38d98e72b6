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

#include "qresynth/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "qresynth/error.hpp"

namespace qresynth {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error("quantile of empty sample");
  if (sorted.size() == 1) return sorted[0];
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

FiveNumber five_number(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  FiveNumber f;
  f.min = values.front();
  f.q1 = quantile_sorted(values, 0.25);
  f.median = quantile_sorted(values, 0.5);
  f.q3 = quantile_sorted(values, 0.75);
  f.max = values.back();
  return f;
}

namespace {

struct Accum {
  std::vector<double> gate, depth, mse;
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<SizeSummary> summarize_by_size(const std::vector<ResultRow>& rows) {
  std::map<std::tuple<std::string, int, int>, Accum> groups;
  for (const auto& r : rows) {
    auto& a = groups[{r.variant, r.qubits, r.gates}];
    a.gate.push_back(r.gate_red_pct);
    a.depth.push_back(r.depth_red_pct);
    a.mse.push_back(r.density_mse);
  }
  std::vector<SizeSummary> out;
  for (const auto& [key, a] : groups) {
    SizeSummary s;
    std::tie(s.variant, s.qubits, s.gates) = key;
    s.n = a.gate.size();
    s.gate_mean = mean_of(a.gate);
    s.gate_box = five_number(a.gate);
    s.depth_mean = mean_of(a.depth);
    s.depth_box = five_number(a.depth);
    s.mse_mean = mean_of(a.mse);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<GateCountSummary> summarize_by_gate_count(
    const std::vector<ResultRow>& rows) {
  std::map<std::pair<std::string, int>, std::vector<double>> groups;
  for (const auto& r : rows) {
    groups[{r.variant, r.gates}].push_back(r.gate_red_pct);
  }
  std::vector<GateCountSummary> out;
  for (const auto& [key, v] : groups) {
    out.push_back({key.first, key.second, v.size(), mean_of(v)});
  }
  return out;
}

std::vector<VariantSummary> summarize_by_variant(
    const std::vector<ResultRow>& rows) {
  std::map<std::string, Accum> groups;
  for (const auto& r : rows) {
    auto& a = groups[r.variant];
    a.gate.push_back(r.gate_red_pct);
    a.depth.push_back(r.depth_red_pct);
    a.mse.push_back(r.density_mse);
  }
  std::vector<VariantSummary> out;
  for (const auto& [variant, a] : groups) {
    out.push_back({variant, a.gate.size(), mean_of(a.gate), mean_of(a.depth),
                   mean_of(a.mse)});
  }
  return out;
}

void write_boxplot_svg(const std::string& path, const std::string& title,
                       const std::vector<std::string>& labels,
                       const std::vector<FiveNumber>& boxes) {
  if (labels.size() != boxes.size()) {
    throw DimensionMismatch("boxplot labels and boxes differ in count");
  }
  const int slot_w = 70;
  const int left = 70, right = 20, top = 40, bottom = 60;
  const int plot_h = 300;
  const int width = left + right + slot_w * std::max<int>(1, static_cast<int>(boxes.size()));
  const int height = top + plot_h + bottom;

  double lo = 0.0, hi = 1.0;
  if (!boxes.empty()) {
    lo = boxes[0].min;
    hi = boxes[0].max;
    for (const auto& b : boxes) {
      lo = std::min(lo, b.min);
      hi = std::max(hi, b.max);
    }
  }
  if (hi - lo < 1e-9) {
    hi += 1.0;
    lo -= 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const auto y_of = [&](double v) {
    return top + plot_h * (hi - v) / (hi - lo);
  };

  std::ofstream out(path);
  if (!out) throw IoError("cannot write SVG: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << title << "</text>\n";

  // y axis with 6 ticks
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = lo + (hi - lo) * t / 5.0;
    const double y = y_of(v);
    out << "<line x1=\"" << left - 4 << "\" y1=\"" << fmt2(y) << "\" x2=\""
        << left << "\" y2=\"" << fmt2(y) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << fmt2(y + 4)
        << "\" text-anchor=\"end\">" << fmt2(v) << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << fmt2(y) << "\" x2=\""
        << width - right << "\" y2=\"" << fmt2(y)
        << "\" stroke=\"#dddddd\"/>\n";
  }

  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    const double cx = left + slot_w * (static_cast<double>(i) + 0.5);
    const double half = slot_w * 0.28;
    // whiskers
    out << "<line x1=\"" << fmt2(cx) << "\" y1=\"" << fmt2(y_of(b.min))
        << "\" x2=\"" << fmt2(cx) << "\" y2=\"" << fmt2(y_of(b.q1))
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << fmt2(cx) << "\" y1=\"" << fmt2(y_of(b.q3))
        << "\" x2=\"" << fmt2(cx) << "\" y2=\"" << fmt2(y_of(b.max))
        << "\" stroke=\"black\"/>\n";
    for (double v : {b.min, b.max}) {
      out << "<line x1=\"" << fmt2(cx - half / 2) << "\" y1=\"" << fmt2(y_of(v))
          << "\" x2=\"" << fmt2(cx + half / 2) << "\" y2=\"" << fmt2(y_of(v))
          << "\" stroke=\"black\"/>\n";
    }
    // box
    out << "<rect x=\"" << fmt2(cx - half) << "\" y=\"" << fmt2(y_of(b.q3))
        << "\" width=\"" << fmt2(2 * half) << "\" height=\""
        << fmt2(y_of(b.q1) - y_of(b.q3))
        << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    // median
    out << "<line x1=\"" << fmt2(cx - half) << "\" y1=\"" << fmt2(y_of(b.median))
        << "\" x2=\"" << fmt2(cx + half) << "\" y2=\"" << fmt2(y_of(b.median))
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt2(cx) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << labels[i] << "</text>\n";
  }
  out << "</svg>\n";
}

void cmd_report(const ExperimentConfig& config) {
  std::vector<ResultRow> rows =
      read_rows_csv(config.out_dir + "/eval/rows.csv");
  const std::string baseline_path = config.out_dir + "/baseline/rows.csv";
  if (fs::exists(baseline_path)) {
    const auto baseline = read_rows_csv(baseline_path);
    rows.insert(rows.end(), baseline.begin(), baseline.end());
  }
  if (rows.empty()) throw Error("no rows to report");

  const std::string dir = config.out_dir + "/report";
  fs::create_directories(dir);

  const auto by_size = summarize_by_size(rows);
  {
    std::ofstream out(dir + "/summary_by_size.csv");
    if (!out) throw IoError("cannot write summary_by_size.csv");
    out << "variant,qubits,gates,n,gate_red_mean,gate_red_q1,gate_red_median,"
           "gate_red_q3,depth_red_mean,depth_red_q1,depth_red_median,"
           "depth_red_q3,density_mse_mean\n";
    for (const auto& s : by_size) {
      out << s.variant << ',' << s.qubits << ',' << s.gates << ',' << s.n
          << ',' << fmt(s.gate_mean) << ',' << fmt(s.gate_box.q1) << ','
          << fmt(s.gate_box.median) << ',' << fmt(s.gate_box.q3) << ','
          << fmt(s.depth_mean) << ',' << fmt(s.depth_box.q1) << ','
          << fmt(s.depth_box.median) << ',' << fmt(s.depth_box.q3) << ','
          << fmt(s.mse_mean) << "\n";
    }
  }

  {
    std::ofstream out(dir + "/summary_by_gatecount.csv");
    if (!out) throw IoError("cannot write summary_by_gatecount.csv");
    out << "variant,gates,n,gate_red_mean\n";
    for (const auto& s : summarize_by_gate_count(rows)) {
      out << s.variant << ',' << s.gates << ',' << s.n << ','
          << fmt(s.gate_mean) << "\n";
    }
  }

  {
    std::ofstream out(dir + "/summary_by_model.csv");
    if (!out) throw IoError("cannot write summary_by_model.csv");
    out << "variant,n,gate_red_mean,depth_red_mean,density_mse_mean\n";
    for (const auto& s : summarize_by_variant(rows)) {
      out << s.variant << ',' << s.n << ',' << fmt(s.gate_mean) << ','
          << fmt(s.depth_mean) << ',' << fmt(s.mse_mean) << "\n";
    }
  }

  // One box per (qubits, gates) pair, per variant, for gate and depth
  // reductions.
  std::map<std::string, std::vector<const SizeSummary*>> by_variant;
  for (const auto& s : by_size) by_variant[s.variant].push_back(&s);
  for (const auto& [variant, summaries] : by_variant) {
    std::vector<std::string> labels;
    std::vector<FiveNumber> gate_boxes, depth_boxes;
    for (const auto* s : summaries) {
      labels.push_back("q" + std::to_string(s->qubits) + "/g" +
                       std::to_string(s->gates));
      gate_boxes.push_back(s->gate_box);
      depth_boxes.push_back(s->depth_box);
    }
    write_boxplot_svg(dir + "/boxplot_gate_" + variant + ".svg",
                      "Gate reduction % (" + variant + ")", labels, gate_boxes);
    write_boxplot_svg(dir + "/boxplot_depth_" + variant + ".svg",
                      "Depth reduction % (" + variant + ")", labels,
                      depth_boxes);
  }
}

}  // namespace qresynth
