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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rematch/embedding.hpp"
#include "rematch/schema.hpp"

namespace rematch {

struct NamedVector {
  std::string name;
  EmbeddingVector vector;
};

struct ScoredTable {
  std::string table;
  double score = 0.0;

  bool operator==(const ScoredTable&) const = default;
};

// The candidate target tables (T_c) for one source table.
struct CandidateSet {
  std::string source_table;
  // Target table names, kept in target-schema order.
  std::vector<std::string> tables;
  // Source attribute name -> top-J hits, in source attribute order.
  std::vector<std::pair<std::string, std::vector<ScoredTable>>> per_attribute_hits;

  bool contains(std::string_view table) const;
};

// Embeddings keyed by document origin key.
using EmbeddingIndex = std::unordered_map<std::string, EmbeddingVector>;

// The min(J, |corpus|) highest-scoring tables, descending by cosine
// similarity, ties broken by corpus order.
std::vector<ScoredTable> retrieve_top_j(const EmbeddingVector& attr_vec,
                                        std::span<const NamedVector> corpus,
                                        std::size_t j);

// `source_vecs` must hold an embedding for every attribute document of
// `table` (keys from DocOrigin::key()); `target_tables` lists the target table
// vectors in target-schema order.
CandidateSet build_candidate_set(const Schema& source, const Table& table,
                                 const EmbeddingIndex& source_vecs,
                                 std::span<const NamedVector> target_tables,
                                 std::size_t j);

// Retrieval disabled (J = infinity): every target table is a candidate.
CandidateSet all_tables_candidate_set(const Table& source_table,
                                      const Schema& target);

}  // namespace rematch
