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

#include <algorithm>

#include "rematch/error.hpp"
#include "rematch/pipeline.hpp"
#include "rematch/text.hpp"

namespace rematch {

CandidateSet apply_guidance(const CandidateSet& candidates,
                            const std::vector<MatchPair>& guidance,
                            const Schema& target) {
  CandidateSet out = candidates;
  bool added = false;
  for (const auto& pair : guidance) {
    if (!pair.target || !same_name(pair.source.table, candidates.source_table)) continue;
    const Table* t = target.find_table(pair.target->table);
    if (!t) {
      throw Error(ErrorCode::kUnknownTargetTable,
                  "guidance names unknown target table '" + pair.target->table + "'",
                  "guidance");
    }
    if (!out.contains(t->name)) {
      out.tables.push_back(t->name);
      added = true;
    }
  }
  if (added) {
    // Keep target-schema order.
    std::vector<std::string> ordered;
    for (const auto& t : target.tables) {
      if (std::find(out.tables.begin(), out.tables.end(), t.name) != out.tables.end()) {
        ordered.push_back(t.name);
      }
    }
    out.tables = std::move(ordered);
  }
  return out;
}

void validate_guidance(const Schema& source, const Schema& target,
                       const std::vector<MatchPair>& guidance) {
  for (std::size_t i = 0; i < guidance.size(); ++i) {
    const auto& p = guidance[i];
    const std::string where = "guidance[" + std::to_string(i) + "]";
    if (!source.find_attribute(p.source)) {
      throw Error(ErrorCode::kValidation,
                  "unknown source attribute " + p.source.table + "." + p.source.attribute,
                  where + ".source");
    }
    if (!p.target) {
      throw Error(ErrorCode::kValidation, "guidance pairs must name a target attribute",
                  where + ".target");
    }
    if (!target.find_table(p.target->table)) {
      throw Error(ErrorCode::kUnknownTargetTable,
                  "unknown target table " + p.target->table, where + ".target");
    }
    if (!target.find_attribute(*p.target)) {
      throw Error(ErrorCode::kValidation,
                  "unknown target attribute " + p.target->table + "." + p.target->attribute,
                  where + ".target");
    }
  }
}

std::vector<MatchPair> auto_guidance(const Schema& source, const GroundTruth& truth) {
  auto mapped = [&](const std::string& table, const std::string& attr) -> const MatchPair* {
    for (const auto& p : truth.pairs) {
      if (p.target && same_name(p.source.table, table) && same_name(p.source.attribute, attr)) {
        return &p;
      }
    }
    return nullptr;
  };
  std::vector<MatchPair> out;
  for (const auto& table : source.tables) {
    const MatchPair* pick = nullptr;
    if (const Attribute* a = table.find_attribute("SUBJECT_ID")) pick = mapped(table.name, a->name);
    for (const auto& a : table.attributes) {
      if (pick) break;
      if (a.is_primary_key) pick = mapped(table.name, a.name);
    }
    if (pick) out.push_back({{table.name, pick->source.attribute}, pick->target});
  }
  return out;
}

}  // namespace rematch
