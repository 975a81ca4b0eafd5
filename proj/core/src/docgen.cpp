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

#include "rematch/docgen.hpp"

#include <nlohmann/json.hpp>

#include "rematch/error.hpp"
#include "rematch/text.hpp"

namespace rematch {

std::string_view doc_mode_name(DocMode mode) {
  return mode == DocMode::kFull ? "full" : "names-only";
}

DocMode parse_doc_mode(std::string_view name) {
  if (same_name(name, "full")) return DocMode::kFull;
  if (same_name(name, "names-only") || same_name(name, "names_only")) {
    return DocMode::kNamesOnly;
  }
  throw Error(ErrorCode::kInvalidRequest,
              "unknown document mode '" + std::string(name) + "'");
}

std::string DocOrigin::key() const {
  std::string k = schema + "__" + table;
  if (attribute) k += "__" + *attribute;
  return k;
}

std::string Document::text() const {
  std::string out;
  if (highlight) out += *highlight + "\n";
  out += title;
  out += "\n";
  out += body;
  return out;
}

void Corpus::add(Document doc) {
  auto key = doc.origin.key();
  if (index_.count(key)) {
    throw Error(ErrorCode::kValidation, "duplicate document origin", key);
  }
  index_.emplace(std::move(key), documents_.size());
  documents_.push_back(std::move(doc));
}

const Document* Corpus::find(std::string_view origin_key) const {
  auto it = index_.find(std::string(origin_key));
  return it == index_.end() ? nullptr : &documents_[it->second];
}

namespace {

std::string render_entry(const Attribute& attr, DocMode mode) {
  if (mode == DocMode::kNamesOnly) return attr.name;
  std::string line = attr.name;
  if (!attr.data_type.empty()) line += " (" + attr.data_type + ")";
  line += ": ";
  line += attr.description;
  if (attr.foreign_key_ref) {
    if (!attr.description.empty()) line += " ";
    line += "References to [" + attr.foreign_key_ref->table + ", " +
            attr.foreign_key_ref->attribute + "]";
  }
  return line;
}

}  // namespace

std::string render_table_body(const Table& table, DocMode mode) {
  std::vector<std::string> lines;
  if (mode == DocMode::kFull && !table.description.empty()) {
    lines.push_back(table.description);
  }
  lines.emplace_back("Primary Keys:");
  for (const auto& a : table.attributes) {
    if (a.is_primary_key) lines.push_back(render_entry(a, mode));
  }
  lines.emplace_back("Foreign Keys:");
  for (const auto& a : table.attributes) {
    if (!a.is_primary_key && a.is_foreign_key()) lines.push_back(render_entry(a, mode));
  }
  lines.emplace_back("Other Columns:");
  for (const auto& a : table.attributes) {
    if (!a.is_primary_key && !a.is_foreign_key()) lines.push_back(render_entry(a, mode));
  }
  return join(lines, "\n");
}

Document table_to_doc(const Schema& schema, const Table& table, DocMode mode) {
  Document doc;
  doc.kind = DocKind::kTable;
  doc.title = table.name;
  doc.body = render_table_body(table, mode);
  doc.origin = {schema.name, table.name, std::nullopt};
  return doc;
}

Document attribute_to_doc(const Schema& schema, const Table& table,
                          const Attribute& attr, DocMode mode) {
  Document doc = table_to_doc(schema, table, mode);
  doc.kind = DocKind::kAttribute;
  doc.highlight = attr.name;
  doc.origin.attribute = attr.name;
  return doc;
}

Corpus table_corpus(const Schema& schema, DocMode mode) {
  Corpus corpus;
  for (const auto& t : schema.tables) corpus.add(table_to_doc(schema, t, mode));
  return corpus;
}

Corpus attribute_corpus(const Schema& schema, DocMode mode) {
  Corpus corpus;
  for (const auto& t : schema.tables) {
    // The body is shared by every attribute of the table; render it once.
    Document base = table_to_doc(schema, t, mode);
    for (const auto& a : t.attributes) {
      Document doc = base;
      doc.kind = DocKind::kAttribute;
      doc.highlight = a.name;
      doc.origin.attribute = a.name;
      corpus.add(std::move(doc));
    }
  }
  return corpus;
}

Corpora build_corpora(const Schema& source, const Schema& target, DocMode mode) {
  return {attribute_corpus(source, mode), table_corpus(target, mode)};
}

namespace {

std::string safe_file_stem(const std::string& key) {
  std::string out;
  out.reserve(key.size());
  for (unsigned char c : key) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    out += ok ? static_cast<char>(c) : '_';
  }
  return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> write_corpus(
    const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> index;
  nlohmann::json manifest = nlohmann::json::object();
  for (const auto& doc : corpus.documents()) {
    auto key = doc.origin.key();
    auto file = safe_file_stem(key) + ".txt";
    write_file(dir / file, doc.text() + "\n");
    manifest[key] = file;
    index.emplace_back(std::move(key), std::move(file));
  }
  write_file(dir / "index.json", manifest.dump(2) + "\n");
  return index;
}

}  // namespace rematch
