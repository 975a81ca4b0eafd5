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

#include <filesystem>

#include <nlohmann/json.hpp>

#include "rematch/prediction.hpp"

namespace rematch {

inline constexpr const char* kManifestFormat = "rematch-run-manifest";
inline constexpr int kManifestVersion = 1;

// {format, version, config, k, tables, avg_candidate_tables,
//  diagnostics_summary, predictions}. See docs/run_manifest.md.
nlohmann::json manifest_to_json(const PredictionMatrix& m);
PredictionMatrix manifest_from_json(const nlohmann::json& j);

// Writes manifest.json and predictions.csv into `dir`.
void write_run_outputs(const PredictionMatrix& m, const std::filesystem::path& dir);

// Accepts a manifest file or a directory holding manifest.json.
PredictionMatrix load_manifest(const std::filesystem::path& path);

// JSON text safe for arbitrary bytes (invalid UTF-8 is replaced).
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace rematch
