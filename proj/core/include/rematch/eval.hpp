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
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rematch/prediction.hpp"
#include "rematch/schema.hpp"

namespace rematch {

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct AttributeOutcome {
  AttributeRef source;
  // 1-based rank of the true target within the row, 0 for a miss.
  std::size_t hit_rank = 0;
};

struct ExcludedAttribute {
  AttributeRef source;
  std::string reason;
};

struct EvalReport {
  std::vector<std::size_t> k_values;
  std::map<std::size_t, double> accuracy_at_k;
  F1Score argmax;
  double avg_candidate_tables = 0.0;
  std::size_t n_evaluated = 0;
  std::size_t n_excluded = 0;
  // Prediction rows with no ground-truth pair.
  std::size_t n_unlabeled = 0;
  std::vector<AttributeOutcome> per_attribute_outcomes;
  std::vector<ExcludedAttribute> excluded;
  nlohmann::json config;
};

// Fraction of ground-truth source attributes whose true target (or NA, via the
// (NA, NA) sentinel) is among the first K predicted targets. Names compare
// case-insensitively. Attributes without a prediction row count as misses.
// Throws KTooLarge when K exceeds the row width and AmbiguousTruth when a
// source attribute has more than one pair.
double accuracy_at_k(const PredictionMatrix& predictions, const GroundTruth& truth,
                     std::size_t k);

// Rank-1 prediction as the single positive per attribute; NA is its own class.
F1Score f1_argmax(const PredictionMatrix& predictions, const GroundTruth& truth);

// Drops 1:n source attributes (listed in `excluded`) and evaluates the rest.
EvalReport make_report(const PredictionMatrix& predictions, const GroundTruth& truth,
                       const std::vector<std::size_t>& k_values);

nlohmann::json report_to_json(const EvalReport& report);

// One aligned row: run label, Acc@K columns, Avg #T.
std::string report_to_text(const EvalReport& report, const std::string& row_label);

}  // namespace rematch
