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
#include <unordered_map>
#include <utility>
#include <vector>

#include "rematch/schema.hpp"

namespace rematch {

enum class DocMode { kFull, kNamesOnly };
enum class DocKind { kTable, kAttribute };

std::string_view doc_mode_name(DocMode mode);
DocMode parse_doc_mode(std::string_view name);

struct DocOrigin {
  std::string schema;
  std::string table;
  std::optional<std::string> attribute;

  // Components joined by "__"; also the on-disk file stem.
  std::string key() const;
  bool operator==(const DocOrigin&) const = default;
};

struct Document {
  DocKind kind = DocKind::kTable;
  std::string title;
  std::optional<std::string> highlight;
  std::string body;
  DocOrigin origin;

  // Highlight line (attribute docs only), title line, then the body.
  std::string text() const;
};

// Ordered documents plus an origin-key index.
class Corpus {
 public:
  void add(Document doc);

  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  const Document* find(std::string_view origin_key) const;

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Overview paragraph, then "Primary Keys:", "Foreign Keys:", "Other Columns:"
// with one `NAME (TYPE): description` entry per line. An attribute that is
// both PK and FK is listed once, under primary keys, with its reference.
std::string render_table_body(const Table& table, DocMode mode);

Document table_to_doc(const Schema& schema, const Table& table, DocMode mode);
Document attribute_to_doc(const Schema& schema, const Table& table,
                          const Attribute& attr, DocMode mode);

Corpus table_corpus(const Schema& schema, DocMode mode);
Corpus attribute_corpus(const Schema& schema, DocMode mode);

struct Corpora {
  Corpus source_attributes;  // one document per source attribute
  Corpus target_tables;      // one document per target table
};

Corpora build_corpora(const Schema& source, const Schema& target, DocMode mode);

// Writes one text file per document into `dir` and returns origin key ->
// file name. The mapping is also written to `dir`/index.json.
std::vector<std::pair<std::string, std::string>> write_corpus(
    const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace rematch
