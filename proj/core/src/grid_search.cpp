// Copyright 2026 The ReMatch Authors.
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

#include "rematch/grid_search.hpp"

#include <cstdio>

#include "rematch/eval.hpp"
#include "rematch/table_format.hpp"

namespace rematch {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string j_label(const JValue& j) {
  return j ? "J=" + std::to_string(*j) : std::string("J=inf");
}

const GridCell* GridReport::cell(const JValue& j, std::size_t k) const {
  for (const auto& c : cells) {
    if (c.j == j && c.k == k) return &c;
  }
  return nullptr;
}

std::optional<double> GridReport::row_avg_candidate_tables(const JValue& j) const {
  for (const auto& c : cells) {
    if (c.j == j && c.ok) return c.avg_candidate_tables;
  }
  return std::nullopt;
}

json GridReport::to_json() const {
  json js = json::array();
  for (const auto& j : j_values) js.push_back(j ? json(*j) : json("inf"));
  json out = {{"j_values", js}, {"k_values", k_values}, {"cells", json::array()}};
  for (const auto& c : cells) {
    json cj = {{"j", c.j ? json(*c.j) : json("inf")}, {"k", c.k}, {"ok", c.ok}};
    if (c.ok) {
      cj["accuracy"] = c.accuracy;
      cj["avg_candidate_tables"] = c.avg_candidate_tables;
    } else {
      cj["error"] = c.error;
    }
    out["cells"].push_back(cj);
  }
  return out;
}

std::string GridReport::to_text() const {
  std::vector<std::string> header{"Retrieved Documents"};
  for (std::size_t k : k_values) header.push_back("Acc@" + std::to_string(k));
  header.emplace_back("Avg #T");
  std::vector<std::vector<std::string>> rows;
  for (const auto& j : j_values) {
    std::vector<std::string> row{j_label(j)};
    for (std::size_t k : k_values) {
      const GridCell* c = cell(j, k);
      row.push_back(c && c->ok ? fixed(c->accuracy, 3) : std::string("error"));
    }
    const auto avg = row_avg_candidate_tables(j);
    row.push_back(avg ? fixed(*avg, 2) : std::string("-"));
    rows.push_back(std::move(row));
  }
  return render_aligned_table(header, rows);
}

GridReport grid_search(const Schema& source, const Schema& target, const GroundTruth& truth,
                       const std::vector<JValue>& j_values,
                       const std::vector<std::size_t>& k_values,
                       const PipelineConfig& config_template, const Backends* backends,
                       const std::function<void(const GridCell&)>& on_cell) {
  Backends owned;
  if (!backends) {
    owned = make_backends(config_template);
    backends = &owned;
  }
  GridReport report;
  report.j_values = j_values;
  report.k_values = k_values;
  for (const auto& j : j_values) {
    for (std::size_t k : k_values) {
      GridCell cell;
      cell.j = j;
      cell.k = k;
      PipelineConfig config = config_template;
      config.retrieval = j.has_value();
      config.j = j.value_or(0);
      config.k = k;
      if (!config.checkpoint_dir.empty()) {
        config.checkpoint_dir /= j_label(j) + "_K=" + std::to_string(k);
      }
      try {
        const PredictionMatrix m = run_rematch(source, target, config, backends);
        const EvalReport r = make_report(m, truth, {k});
        cell.accuracy = r.accuracy_at_k.at(k);
        cell.avg_candidate_tables = r.avg_candidate_tables;
        cell.ok = true;
      } catch (const Error& e) {
        cell.error = e.what();
      }
      if (on_cell) on_cell(cell);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace rematch
