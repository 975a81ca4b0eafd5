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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rematch/prediction.hpp"
#include "rematch/retrieval.hpp"
#include "rematch/schema.hpp"

namespace rematch {

struct ParsedResponse {
  // One row per parsed entry, in response order, at most K targets each.
  std::vector<RankedRow> rows;
  std::vector<Diagnostic> diagnostics;
};

// Parses a relaxed literal: JSON plus single-quoted strings, bare keys,
// trailing commas, and Python None/True/False. Returns nullopt on any syntax
// error. Nesting depth is capped.
std::optional<nlohmann::ordered_json> parse_relaxed_literal(std::string_view text,
                                                            std::size_t* consumed = nullptr);

// Total: never throws for any input except Unparseable when no mapping
// object can be located. Surrounding prose and code fences are ignored.
// `target` resolves candidate-table attribute lists for hallucination checks.
ParsedResponse parse_topk_response(std::string_view raw,
                                   std::span<const AttributeRef> expected,
                                   std::size_t k, const CandidateSet& candidates,
                                   const Schema& target);

}  // namespace rematch
