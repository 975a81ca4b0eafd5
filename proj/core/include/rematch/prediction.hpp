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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rematch/schema.hpp"

namespace rematch {

enum class DiagnosticKind {
  kMissingRow,
  kExtraRow,
  kHallucinatedTarget,
  kDuplicateNA,
  kShortRow,
  kInconsistentNA,
  kUnparseable,
  kUnresolved,
};

std::string_view diagnostic_kind_name(DiagnosticKind kind);
DiagnosticKind parse_diagnostic_kind(std::string_view name);

struct Diagnostic {
  DiagnosticKind kind;
  std::string src_table;
  std::string src_attr;
  std::string detail;

  bool operator==(const Diagnostic&) const = default;
};

// One row of the prediction matrix: K ranked targets for a source attribute.
struct RankedRow {
  std::string src_table;
  std::string src_attr;
  std::vector<MatchTarget> targets;
  // No usable ranker answer; targets are NA padding.
  bool unresolved = false;

  bool operator==(const RankedRow&) const = default;
};

struct TableRun {
  std::string source_table;
  std::vector<std::string> candidate_tables;
  double seconds = 0.0;
  std::size_t ranker_calls = 0;
  std::vector<Diagnostic> diagnostics;
};

// Psi_K: one row per source attribute, every row exactly k targets wide.
struct PredictionMatrix {
  std::size_t k = 0;
  std::vector<RankedRow> rows;
  std::vector<TableRun> tables;
  nlohmann::json config;  // snapshot of the producing configuration

  // Mean |T_c| over source tables.
  double avg_candidate_tables() const;
  std::vector<Diagnostic> diagnostics() const;
};

nlohmann::json diagnostic_to_json(const Diagnostic& d);
Diagnostic diagnostic_from_json(const nlohmann::json& j);
nlohmann::json ranked_row_to_json(const RankedRow& row);
RankedRow ranked_row_from_json(const nlohmann::json& j);
nlohmann::json table_run_to_json(const TableRun& run);
TableRun table_run_from_json(const nlohmann::json& j);

// SRC_ENT,SRC_ATT,TGT_ENT1,TGT_ATT1,...,TGT_ENTk,TGT_ATTk with literal NA.
std::string predictions_to_csv(const PredictionMatrix& m);

}  // namespace rematch
