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

#include "rematch/prediction.hpp"

#include <array>

#include "rematch/error.hpp"
#include "rematch/text.hpp"

namespace rematch {

namespace {

constexpr std::array<std::pair<DiagnosticKind, std::string_view>, 8> kKindNames{{
    {DiagnosticKind::kMissingRow, "MissingRow"},
    {DiagnosticKind::kExtraRow, "ExtraRow"},
    {DiagnosticKind::kHallucinatedTarget, "HallucinatedTarget"},
    {DiagnosticKind::kDuplicateNA, "DuplicateNA"},
    {DiagnosticKind::kShortRow, "ShortRow"},
    {DiagnosticKind::kInconsistentNA, "InconsistentNA"},
    {DiagnosticKind::kUnparseable, "Unparseable"},
    {DiagnosticKind::kUnresolved, "Unresolved"},
}};

nlohmann::json target_to_json(const MatchTarget& t) {
  if (!t) return nullptr;
  return nlohmann::json::array({t->table, t->attribute});
}

MatchTarget target_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return AttributeRef{j.at(0).get<std::string>(), j.at(1).get<std::string>()};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view diagnostic_kind_name(DiagnosticKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

DiagnosticKind parse_diagnostic_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::kParse, "unknown diagnostic kind '" + std::string(name) + "'");
}

double PredictionMatrix::avg_candidate_tables() const {
  if (tables.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& t : tables) sum += static_cast<double>(t.candidate_tables.size());
  return sum / static_cast<double>(tables.size());
}

std::vector<Diagnostic> PredictionMatrix::diagnostics() const {
  std::vector<Diagnostic> out;
  for (const auto& t : tables) out.insert(out.end(), t.diagnostics.begin(), t.diagnostics.end());
  return out;
}

nlohmann::json diagnostic_to_json(const Diagnostic& d) {
  return {{"kind", diagnostic_kind_name(d.kind)},
          {"src_table", d.src_table},
          {"src_attr", d.src_attr},
          {"detail", d.detail}};
}

Diagnostic diagnostic_from_json(const nlohmann::json& j) {
  return {parse_diagnostic_kind(j.at("kind").get<std::string>()),
          j.value("src_table", ""), j.value("src_attr", ""), j.value("detail", "")};
}

nlohmann::json ranked_row_to_json(const RankedRow& row) {
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& t : row.targets) targets.push_back(target_to_json(t));
  return {{"src_table", row.src_table},
          {"src_attr", row.src_attr},
          {"targets", targets},
          {"unresolved", row.unresolved}};
}

RankedRow ranked_row_from_json(const nlohmann::json& j) {
  RankedRow row;
  row.src_table = j.at("src_table").get<std::string>();
  row.src_attr = j.at("src_attr").get<std::string>();
  for (const auto& t : j.at("targets")) row.targets.push_back(target_from_json(t));
  row.unresolved = j.value("unresolved", false);
  return row;
}

nlohmann::json table_run_to_json(const TableRun& run) {
  nlohmann::json diags = nlohmann::json::array();
  for (const auto& d : run.diagnostics) diags.push_back(diagnostic_to_json(d));
  return {{"source_table", run.source_table},
          {"candidate_tables", run.candidate_tables},
          {"n_candidate_tables", run.candidate_tables.size()},
          {"seconds", run.seconds},
          {"ranker_calls", run.ranker_calls},
          {"diagnostics", diags}};
}

TableRun table_run_from_json(const nlohmann::json& j) {
  TableRun run;
  run.source_table = j.at("source_table").get<std::string>();
  run.candidate_tables = j.at("candidate_tables").get<std::vector<std::string>>();
  run.seconds = j.value("seconds", 0.0);
  run.ranker_calls = j.value("ranker_calls", std::size_t{0});
  for (const auto& d : j.value("diagnostics", nlohmann::json::array())) {
    run.diagnostics.push_back(diagnostic_from_json(d));
  }
  return run;
}

std::string predictions_to_csv(const PredictionMatrix& m) {
  std::string out = "SRC_ENT,SRC_ATT";
  for (std::size_t i = 1; i <= m.k; ++i) {
    out += ",TGT_ENT" + std::to_string(i) + ",TGT_ATT" + std::to_string(i);
  }
  out += "\n";
  for (const auto& row : m.rows) {
    out += csv_field(row.src_table) + "," + csv_field(row.src_attr);
    for (std::size_t i = 0; i < m.k; ++i) {
      const MatchTarget& t = i < row.targets.size() ? row.targets[i] : MatchTarget{};
      out += t ? "," + csv_field(t->table) + "," + csv_field(t->attribute) : ",NA,NA";
    }
    out += "\n";
  }
  return out;
}

}  // namespace rematch
