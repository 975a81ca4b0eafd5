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
#include <vector>

#include "rematch/docgen.hpp"
#include "rematch/prediction.hpp"
#include "rematch/ranker.hpp"
#include "rematch/retrieval.hpp"
#include "rematch/schema.hpp"

namespace rematch {

struct TopkRequest {
  const Schema* source = nullptr;
  const Table* source_table = nullptr;
  const Corpus* source_docs = nullptr;
  const CandidateSet* candidates = nullptr;
  const Schema* target = nullptr;
  const Corpus* target_docs = nullptr;
  DocMode mode = DocMode::kFull;
  std::size_t k = 1;
  std::vector<MatchPair> guidance;
  TranscriptLog* transcript = nullptr;  // optional
};

struct TopkResult {
  // Exactly one row per source attribute, in table order, each K wide.
  std::vector<RankedRow> rows;
  std::vector<Diagnostic> diagnostics;
  std::size_t ranker_calls = 0;
};

// Ranks one source table against its candidate tables.
//
// Prompts over the ranker's character budget are split into batches of
// candidate tables; the union of each batch's winning tables is then ranked
// again. Attributes missing from the response are re-asked once, and anything
// still missing becomes an Unresolved row of K (NA, NA) targets. Rows shorter
// than K are padded with (NA, NA).
TopkResult create_topk_mapping(const TopkRequest& req, Ranker& ranker);

}  // namespace rematch
