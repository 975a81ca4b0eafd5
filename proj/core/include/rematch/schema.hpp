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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rematch {

// A (table, attribute) coordinate inside one schema.
struct AttributeRef {
  std::string table;
  std::string attribute;

  bool operator==(const AttributeRef&) const = default;
};

// Case-insensitive, whitespace-trimmed comparison of both components.
bool same_ref(const AttributeRef& a, const AttributeRef& b);

// nullopt is the NA sentinel: a null mapping / "no relevant target".
using MatchTarget = std::optional<AttributeRef>;

bool same_target(const MatchTarget& a, const MatchTarget& b);

struct Attribute {
  std::string name;
  std::string data_type;
  std::string description;
  bool is_primary_key = false;
  std::optional<AttributeRef> foreign_key_ref;

  bool is_foreign_key() const { return foreign_key_ref.has_value(); }
  bool operator==(const Attribute&) const = default;
};

struct Table {
  std::string name;
  std::string description;
  std::vector<Attribute> attributes;

  const Attribute* find_attribute(std::string_view attr_name) const;
  bool operator==(const Table&) const = default;
};

struct Schema {
  std::string name;
  std::vector<Table> tables;

  const Table* find_table(std::string_view table_name) const;
  // Position of the table in file order, or npos.
  std::size_t table_index(std::string_view table_name) const;
  const Attribute* find_attribute(const AttributeRef& ref) const;
  std::size_t attribute_count() const;
  bool operator==(const Schema&) const = default;
};

struct MatchPair {
  AttributeRef source;
  MatchTarget target;

  bool operator==(const MatchPair&) const = default;
};

struct GroundTruth {
  std::vector<MatchPair> pairs;

  bool operator==(const GroundTruth&) const = default;
};

struct DatasetStats {
  std::size_t n_columns = 0;
  std::size_t n_tables = 0;
  std::size_t n_mapped_columns = 0;
  std::size_t n_null_mappings = 0;

  bool operator==(const DatasetStats&) const = default;
};

// Validates every Schema invariant. FK references into tables that are not
// part of the schema are tolerated and reported through `warnings`.
void validate_schema(const Schema& schema,
                     std::vector<std::string>* warnings = nullptr);

Schema schema_from_json(const nlohmann::json& doc,
                        std::vector<std::string>* warnings = nullptr,
                        std::string_view origin = {});
nlohmann::json schema_to_json(const Schema& schema);

Schema parse_schema(std::string_view text, std::string_view origin = "<memory>",
                    std::vector<std::string>* warnings = nullptr);
Schema load_schema(const std::filesystem::path& path,
                   std::vector<std::string>* warnings = nullptr);
void save_schema(const Schema& schema, const std::filesystem::path& path);

// Four-column mapping file: SRC_ENT,SRC_ATT,TGT_ENT,TGT_ATT with literal NA.
GroundTruth parse_ground_truth(std::string_view csv,
                               std::string_view origin = "<memory>");
GroundTruth load_ground_truth(const std::filesystem::path& path);
std::string ground_truth_to_csv(const GroundTruth& truth);

// Source attributes that appear in more than one pair (1:n), in first-seen
// order.
std::vector<AttributeRef> one_to_many_sources(const GroundTruth& truth);

DatasetStats dataset_stats(const Schema& source, const GroundTruth& truth);

// Target-side statistics: n_mapped_columns counts distinct target attributes
// referenced by a non-NA pair. Pairs naming attributes outside `target` are
// reported through `warnings` (partial target subsets are legitimate).
DatasetStats target_stats(const Schema& target, const GroundTruth& truth,
                          std::vector<std::string>* warnings = nullptr);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace rematch
