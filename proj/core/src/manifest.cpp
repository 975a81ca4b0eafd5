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

#include "rematch/manifest.hpp"

#include <map>

#include "rematch/error.hpp"
#include "rematch/schema.hpp"

namespace rematch {

using nlohmann::json;

std::string dump_json(const json& j, int indent) {
  return j.dump(indent, ' ', false, json::error_handler_t::replace);
}

json manifest_to_json(const PredictionMatrix& m) {
  json tables = json::array();
  for (const auto& t : m.tables) tables.push_back(table_run_to_json(t));
  json rows = json::array();
  for (const auto& r : m.rows) rows.push_back(ranked_row_to_json(r));
  std::map<std::string, std::size_t> counts;
  for (const auto& d : m.diagnostics()) ++counts[std::string(diagnostic_kind_name(d.kind))];
  json summary = json::object();
  for (const auto& [name, n] : counts) summary[name] = n;
  return {{"format", kManifestFormat},
          {"version", kManifestVersion},
          {"config", m.config.is_null() ? json::object() : m.config},
          {"k", m.k},
          {"tables", tables},
          {"avg_candidate_tables", m.avg_candidate_tables()},
          {"diagnostics_summary", summary},
          {"predictions", rows}};
}

PredictionMatrix manifest_from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != kManifestFormat) {
    throw Error(ErrorCode::kParse, "not a run manifest", "format");
  }
  if (j.value("version", 0) != kManifestVersion) {
    throw Error(ErrorCode::kParse,
                "unsupported manifest version " + j.at("version").dump(), "version");
  }
  PredictionMatrix m;
  try {
    m.k = j.at("k").get<std::size_t>();
    m.config = j.value("config", json::object());
    for (const auto& t : j.at("tables")) m.tables.push_back(table_run_from_json(t));
    for (const auto& r : j.at("predictions")) m.rows.push_back(ranked_row_from_json(r));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed manifest: ") + e.what());
  }
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (m.rows[i].targets.size() != m.k) {
      throw Error(ErrorCode::kValidation, "prediction row width differs from k",
                  "predictions[" + std::to_string(i) + "]");
    }
  }
  return m;
}

void write_run_outputs(const PredictionMatrix& m, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "manifest.json", dump_json(manifest_to_json(m)) + "\n");
  write_file(dir / "predictions.csv", predictions_to_csv(m));
}

PredictionMatrix load_manifest(const std::filesystem::path& path) {
  const auto file =
      std::filesystem::is_directory(path) ? path / "manifest.json" : path;
  json j;
  try {
    j = json::parse(read_file(file));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what(), file.string());
  }
  return manifest_from_json(j);
}

}  // namespace rematch
