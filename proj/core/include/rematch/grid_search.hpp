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

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rematch/pipeline.hpp"

namespace rematch {

// nullopt stands for J = infinity (retrieval skipped).
using JValue = std::optional<std::size_t>;

std::string j_label(const JValue& j);

struct GridCell {
  JValue j;
  std::size_t k = 0;
  bool ok = false;
  std::string error;
  double accuracy = 0.0;
  double avg_candidate_tables = 0.0;
};

struct GridReport {
  std::vector<JValue> j_values;
  std::vector<std::size_t> k_values;
  std::vector<GridCell> cells;  // row-major: J outer, K inner

  const GridCell* cell(const JValue& j, std::size_t k) const;
  // Avg #T of the first successful cell in the row.
  std::optional<double> row_avg_candidate_tables(const JValue& j) const;

  nlohmann::json to_json() const;
  // Rows J, columns Acc@K, final column Avg #T.
  std::string to_text() const;
};

// Runs every (J, K) cell and evaluates accuracy@K against `truth`. A failing
// cell is recorded and the grid continues. Backends, and so the embedding
// cache, are shared by all cells.
GridReport grid_search(const Schema& source, const Schema& target,
                       const GroundTruth& truth, const std::vector<JValue>& j_values,
                       const std::vector<std::size_t>& k_values,
                       const PipelineConfig& config_template,
                       const Backends* backends = nullptr,
                       const std::function<void(const GridCell&)>& on_cell = {});

}  // namespace rematch
