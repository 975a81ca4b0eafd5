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

#include "rematch/schema.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rematch/error.hpp"
#include "rematch/text.hpp"

namespace rematch {

using nlohmann::json;

bool same_ref(const AttributeRef& a, const AttributeRef& b) {
  return same_name(a.table, b.table) && same_name(a.attribute, b.attribute);
}

bool same_target(const MatchTarget& a, const MatchTarget& b) {
  if (!a || !b) return !a && !b;
  return same_ref(*a, *b);
}

const Attribute* Table::find_attribute(std::string_view attr_name) const {
  for (const auto& a : attributes) {
    if (same_name(a.name, attr_name)) return &a;
  }
  return nullptr;
}

const Table* Schema::find_table(std::string_view table_name) const {
  auto idx = table_index(table_name);
  return idx == std::string::npos ? nullptr : &tables[idx];
}

std::size_t Schema::table_index(std::string_view table_name) const {
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (same_name(tables[i].name, table_name)) return i;
  }
  return std::string::npos;
}

const Attribute* Schema::find_attribute(const AttributeRef& ref) const {
  const Table* t = find_table(ref.table);
  return t ? t->find_attribute(ref.attribute) : nullptr;
}

std::size_t Schema::attribute_count() const {
  std::size_t n = 0;
  for (const auto& t : tables) n += t.attributes.size();
  return n;
}

void validate_schema(const Schema& schema, std::vector<std::string>* warnings) {
  if (schema.tables.empty()) {
    throw Error(ErrorCode::kValidation, "schema has no tables", schema.name);
  }
  std::unordered_set<std::string> table_keys;
  for (const auto& table : schema.tables) {
    if (trim(table.name).empty()) {
      throw Error(ErrorCode::kValidation, "table with empty name", schema.name);
    }
    if (!table_keys.insert(name_key(table.name)).second) {
      throw Error(ErrorCode::kValidation,
                  "duplicate table name '" + table.name + "'", table.name);
    }
    if (table.attributes.empty()) {
      throw Error(ErrorCode::kValidation,
                  "table '" + table.name + "' has no attributes", table.name);
    }
    std::unordered_set<std::string> attr_keys;
    for (const auto& attr : table.attributes) {
      if (trim(attr.name).empty()) {
        throw Error(ErrorCode::kValidation, "attribute with empty name",
                    table.name);
      }
      if (!attr_keys.insert(name_key(attr.name)).second) {
        throw Error(ErrorCode::kValidation,
                    "duplicate attribute name '" + attr.name + "'",
                    table.name + "." + attr.name);
      }
    }
  }
  for (const auto& table : schema.tables) {
    for (const auto& attr : table.attributes) {
      if (!attr.foreign_key_ref) continue;
      const auto& ref = *attr.foreign_key_ref;
      const Table* referenced = schema.find_table(ref.table);
      if (referenced == nullptr) {
        if (warnings) {
          warnings->push_back(table.name + "." + attr.name +
                              " references table '" + ref.table +
                              "' outside schema '" + schema.name + "'");
        }
        continue;
      }
      if (referenced->find_attribute(ref.attribute) == nullptr) {
        throw Error(ErrorCode::kValidation,
                    "foreign key references missing attribute " + ref.table +
                        "." + ref.attribute,
                    table.name + "." + attr.name);
      }
    }
  }
}

namespace {

std::string string_field(const json& obj, const char* key, bool required,
                         const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) {
      throw Error(ErrorCode::kParse, std::string("missing field '") + key + "'",
                  where);
    }
    return {};
  }
  if (!it->is_string()) {
    throw Error(ErrorCode::kParse,
                std::string("field '") + key + "' must be a string", where);
  }
  return it->get<std::string>();
}

}  // namespace

Schema schema_from_json(const json& doc, std::vector<std::string>* warnings,
                        std::string_view origin) {
  const std::string root = origin.empty() ? "$" : std::string(origin) + ":$";
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParse, "schema document must be an object", root);
  }
  Schema schema;
  schema.name = string_field(doc, "name", true, root);
  auto tables = doc.find("tables");
  if (tables == doc.end() || !tables->is_array()) {
    throw Error(ErrorCode::kParse, "'tables' must be an array", root + ".tables");
  }
  for (std::size_t ti = 0; ti < tables->size(); ++ti) {
    const json& jt = (*tables)[ti];
    const std::string where = root + ".tables[" + std::to_string(ti) + "]";
    if (!jt.is_object()) throw Error(ErrorCode::kParse, "expected object", where);
    Table table;
    table.name = string_field(jt, "name", true, where);
    table.description = string_field(jt, "description", false, where);
    auto attrs = jt.find("attributes");
    if (attrs == jt.end() || !attrs->is_array()) {
      throw Error(ErrorCode::kParse, "'attributes' must be an array",
                  where + ".attributes");
    }
    for (std::size_t ai = 0; ai < attrs->size(); ++ai) {
      const json& ja = (*attrs)[ai];
      const std::string awhere = where + ".attributes[" + std::to_string(ai) + "]";
      if (!ja.is_object()) throw Error(ErrorCode::kParse, "expected object", awhere);
      Attribute attr;
      attr.name = string_field(ja, "name", true, awhere);
      attr.data_type = string_field(ja, "type", false, awhere);
      attr.description = string_field(ja, "description", false, awhere);
      if (auto pk = ja.find("primary_key"); pk != ja.end() && !pk->is_null()) {
        if (!pk->is_boolean()) {
          throw Error(ErrorCode::kParse, "'primary_key' must be a boolean",
                      awhere);
        }
        attr.is_primary_key = pk->get<bool>();
      }
      if (auto ref = ja.find("references"); ref != ja.end() && !ref->is_null()) {
        if (!ref->is_array() || ref->size() != 2 || !(*ref)[0].is_string() ||
            !(*ref)[1].is_string()) {
          throw Error(ErrorCode::kParse,
                      "'references' must be [table, attribute] or null",
                      awhere);
        }
        attr.foreign_key_ref =
            AttributeRef{(*ref)[0].get<std::string>(), (*ref)[1].get<std::string>()};
      }
      table.attributes.push_back(std::move(attr));
    }
    schema.tables.push_back(std::move(table));
  }
  validate_schema(schema, warnings);
  return schema;
}

json schema_to_json(const Schema& schema) {
  json tables = json::array();
  for (const auto& t : schema.tables) {
    json attrs = json::array();
    for (const auto& a : t.attributes) {
      json ja = {{"name", a.name},
                 {"type", a.data_type},
                 {"description", a.description},
                 {"primary_key", a.is_primary_key}};
      if (a.foreign_key_ref) {
        ja["references"] = {a.foreign_key_ref->table, a.foreign_key_ref->attribute};
      } else {
        ja["references"] = nullptr;
      }
      attrs.push_back(std::move(ja));
    }
    tables.push_back(
        {{"name", t.name}, {"description", t.description}, {"attributes", attrs}});
  }
  return {{"name", schema.name}, {"tables", tables}};
}

Schema parse_schema(std::string_view text, std::string_view origin,
                    std::vector<std::string>* warnings) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what(), std::string(origin));
  }
  return schema_from_json(doc, warnings, origin);
}

Schema load_schema(const std::filesystem::path& path,
                   std::vector<std::string>* warnings) {
  return parse_schema(read_file(path), path.string(), warnings);
}

void save_schema(const Schema& schema, const std::filesystem::path& path) {
  write_file(path, schema_to_json(schema).dump(2) + "\n");
}

namespace {

// RFC 4180 records; quoted fields may contain commas, quotes, and newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text,
                                                std::string_view origin) {
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB &&
      static_cast<unsigned char>(text[2]) == 0xBF) {
    text.remove_prefix(3);
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    bool blank = row.size() == 1 && trim(row[0]).empty();
    if (!blank) rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !trim(field).empty()) {
          throw Error(ErrorCode::kParse, "unexpected quote inside field",
                      std::string(origin) + ":" + std::to_string(line));
        }
        field.clear();
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParse, "unterminated quoted field",
                std::string(origin) + ":" + std::to_string(line));
  }
  if (field_started || !row.empty()) end_row();
  return rows;
}

bool is_na_token(std::string_view s) {
  s = trim(s);
  return s.empty() || same_name(s, "NA");
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

GroundTruth parse_ground_truth(std::string_view csv, std::string_view origin) {
  auto rows = parse_csv(csv, origin);
  if (rows.empty()) {
    throw Error(ErrorCode::kParse, "missing header", std::string(origin));
  }
  const auto& header = rows.front();
  auto column = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (same_name(header[i], name)) return i;
    }
    throw Error(ErrorCode::kParse,
                "header lacks column " + std::string(name), std::string(origin));
  };
  const std::size_t c_st = column("SRC_ENT"), c_sa = column("SRC_ATT"),
                    c_tt = column("TGT_ENT"), c_ta = column("TGT_ATT");
  const std::size_t width = std::max({c_st, c_sa, c_tt, c_ta}) + 1;

  GroundTruth truth;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = std::string(origin) + ": record " + std::to_string(r + 1);
    if (row.size() < width) {
      throw Error(ErrorCode::kParse,
                  "expected at least " + std::to_string(width) + " fields", where);
    }
    MatchPair pair;
    pair.source = {std::string(trim(row[c_st])), std::string(trim(row[c_sa]))};
    if (pair.source.table.empty() || pair.source.attribute.empty()) {
      throw Error(ErrorCode::kParse, "empty source table or attribute", where);
    }
    const bool table_na = is_na_token(row[c_tt]);
    const bool attr_na = is_na_token(row[c_ta]);
    if (table_na != attr_na) {
      throw Error(ErrorCode::kInconsistentNA,
                  "exactly one of TGT_ENT/TGT_ATT is NA for " +
                      pair.source.table + "." + pair.source.attribute,
                  where);
    }
    if (!table_na) {
      pair.target = AttributeRef{std::string(trim(row[c_tt])),
                                 std::string(trim(row[c_ta]))};
    }
    truth.pairs.push_back(std::move(pair));
  }
  return truth;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  return parse_ground_truth(read_file(path), path.string());
}

std::string ground_truth_to_csv(const GroundTruth& truth) {
  std::string out = "SRC_ENT,SRC_ATT,TGT_ENT,TGT_ATT\n";
  for (const auto& p : truth.pairs) {
    out += csv_escape(p.source.table) + "," + csv_escape(p.source.attribute) + ",";
    if (p.target) {
      out += csv_escape(p.target->table) + "," + csv_escape(p.target->attribute);
    } else {
      out += "NA,NA";
    }
    out += "\n";
  }
  return out;
}

std::vector<AttributeRef> one_to_many_sources(const GroundTruth& truth) {
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  std::vector<AttributeRef> order;
  for (const auto& p : truth.pairs) {
    auto key = std::make_pair(name_key(p.source.table), name_key(p.source.attribute));
    if (counts[key]++ == 0) order.push_back(p.source);
  }
  std::vector<AttributeRef> out;
  for (const auto& ref : order) {
    if (counts[{name_key(ref.table), name_key(ref.attribute)}] > 1) out.push_back(ref);
  }
  return out;
}

DatasetStats dataset_stats(const Schema& source, const GroundTruth& truth) {
  // Per distinct source attribute: has any non-NA pair?
  std::map<std::pair<std::string, std::string>, bool> mapped;
  for (const auto& p : truth.pairs) {
    if (source.find_attribute(p.source) == nullptr) {
      throw Error(ErrorCode::kUnknownAttribute,
                  "ground truth references unknown source attribute",
                  p.source.table + "." + p.source.attribute);
    }
    auto key = std::make_pair(name_key(p.source.table), name_key(p.source.attribute));
    auto [it, inserted] = mapped.emplace(key, p.target.has_value());
    if (!inserted) it->second = it->second || p.target.has_value();
  }
  DatasetStats stats;
  stats.n_columns = source.attribute_count();
  stats.n_tables = source.tables.size();
  for (const auto& [key, is_mapped] : mapped) {
    if (is_mapped) {
      ++stats.n_mapped_columns;
    } else {
      ++stats.n_null_mappings;
    }
  }
  return stats;
}

DatasetStats target_stats(const Schema& target, const GroundTruth& truth,
                          std::vector<std::string>* warnings) {
  std::set<std::pair<std::string, std::string>> referenced;
  for (const auto& p : truth.pairs) {
    if (!p.target) continue;
    if (target.find_attribute(*p.target) == nullptr && warnings) {
      warnings->push_back("ground truth references target attribute " +
                          p.target->table + "." + p.target->attribute +
                          " absent from schema '" + target.name + "'");
    }
    referenced.emplace(name_key(p.target->table), name_key(p.target->attribute));
  }
  DatasetStats stats;
  stats.n_columns = target.attribute_count();
  stats.n_tables = target.tables.size();
  stats.n_mapped_columns = referenced.size();
  return stats;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open file for reading", path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open file for writing", path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed", path.string());
}

}  // namespace rematch
