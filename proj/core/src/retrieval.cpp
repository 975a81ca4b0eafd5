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

#include "rematch/retrieval.hpp"

#include <algorithm>
#include <numeric>

#include "rematch/error.hpp"
#include "rematch/text.hpp"

namespace rematch {

bool CandidateSet::contains(std::string_view table) const {
  return std::any_of(tables.begin(), tables.end(),
                     [&](const std::string& t) { return same_name(t, table); });
}

std::vector<ScoredTable> retrieve_top_j(const EmbeddingVector& attr_vec,
                                        std::span<const NamedVector> corpus,
                                        std::size_t j) {
  if (j == 0) throw Error(ErrorCode::kPrecondition, "J must be at least 1");
  if (corpus.empty()) throw Error(ErrorCode::kPrecondition, "empty table corpus");
  std::vector<double> scores(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    scores[i] = cosine_similarity(attr_vec, corpus[i].vector);
  }
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t take = std::min(j, corpus.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  std::vector<ScoredTable> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back({corpus[order[i]].name, scores[order[i]]});
  }
  return out;
}

CandidateSet build_candidate_set(const Schema& source, const Table& table,
                                 const EmbeddingIndex& source_vecs,
                                 std::span<const NamedVector> target_tables,
                                 std::size_t j) {
  CandidateSet out;
  out.source_table = table.name;
  std::vector<bool> selected(target_tables.size(), false);
  for (const auto& attr : table.attributes) {
    const std::string key = DocOrigin{source.name, table.name, attr.name}.key();
    auto it = source_vecs.find(key);
    if (it == source_vecs.end()) {
      throw Error(ErrorCode::kMissingEmbedding, "no embedding for source attribute", key);
    }
    auto hits = retrieve_top_j(it->second, target_tables, j);
    for (const auto& hit : hits) {
      for (std::size_t i = 0; i < target_tables.size(); ++i) {
        if (target_tables[i].name == hit.table) {
          selected[i] = true;
          break;
        }
      }
    }
    out.per_attribute_hits.emplace_back(attr.name, std::move(hits));
  }
  for (std::size_t i = 0; i < target_tables.size(); ++i) {
    if (selected[i]) out.tables.push_back(target_tables[i].name);
  }
  return out;
}

CandidateSet all_tables_candidate_set(const Table& source_table,
                                      const Schema& target) {
  CandidateSet out;
  out.source_table = source_table.name;
  for (const auto& t : target.tables) out.tables.push_back(t.name);
  for (const auto& a : source_table.attributes) {
    out.per_attribute_hits.emplace_back(a.name, std::vector<ScoredTable>{});
  }
  return out;
}

}  // namespace rematch
