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
#include <string>
#include <vector>

#include "rematch/docgen.hpp"
#include "rematch/retrieval.hpp"
#include "rematch/schema.hpp"

namespace rematch {

struct MatchPrompt {
  std::string system_text;
  std::string user_text;
  std::size_t k = 0;
  std::string source_table;
  std::vector<std::string> source_attributes;
  std::vector<std::string> candidate_tables;

  std::size_t size_chars() const { return system_text.size() + user_text.size(); }
  std::string hash() const;
};

std::string match_system_text(std::size_t k);
std::string expected_output_block(std::size_t k);

struct PromptInputs {
  const Schema* source = nullptr;
  const Table* source_table = nullptr;
  // Attributes to match, in the order they should be listed. Empty means
  // every attribute of the table.
  std::vector<std::string> attributes;
  const Corpus* source_docs = nullptr;  // attribute documents (C_s)
  const CandidateSet* candidates = nullptr;
  const Schema* target = nullptr;
  const Corpus* target_docs = nullptr;  // table documents (C_t)
  std::size_t k = 1;
  // Pairs for other source tables are ignored.
  std::vector<MatchPair> guidance;
};

// Deterministic: identical inputs give byte-identical prompts.
MatchPrompt build_match_prompt(const PromptInputs& in);

}  // namespace rematch
