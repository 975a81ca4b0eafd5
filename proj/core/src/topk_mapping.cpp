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

#include "rematch/topk_mapping.hpp"

#include <algorithm>

#include "rematch/error.hpp"
#include "rematch/prompt.hpp"
#include "rematch/response_parser.hpp"
#include "rematch/text.hpp"

namespace rematch {

namespace {

class TableRanker {
 public:
  TableRanker(const TopkRequest& req, Ranker& ranker) : req_(req), ranker_(ranker) {}

  std::size_t calls() const { return calls_; }

  ParsedResponse ask(const std::vector<std::string>& attrs, const CandidateSet& candidates) {
    MatchPrompt prompt = build(attrs, candidates);
    if (prompt.size_chars() <= ranker_.context_budget_chars()) {
      return rank_and_parse(prompt, attrs, candidates);
    }
    return ask_in_batches(attrs, candidates);
  }

 private:
  MatchPrompt build(const std::vector<std::string>& attrs, const CandidateSet& candidates) const {
    PromptInputs in;
    in.source = req_.source;
    in.source_table = req_.source_table;
    in.attributes = attrs;
    in.source_docs = req_.source_docs;
    in.candidates = &candidates;
    in.target = req_.target;
    in.target_docs = req_.target_docs;
    in.k = req_.k;
    in.guidance = req_.guidance;
    return build_match_prompt(in);
  }

  ParsedResponse rank_and_parse(const MatchPrompt& prompt,
                                const std::vector<std::string>& attrs,
                                const CandidateSet& candidates) {
    RankContext ctx;
    ctx.source = req_.source;
    ctx.source_table = req_.source_table;
    ctx.attributes = attrs;
    ctx.candidates = &candidates;
    ctx.target = req_.target;
    ctx.mode = req_.mode;
    ctx.k = req_.k;
    ctx.guidance = req_.guidance;
    ++calls_;
    const std::string raw = ranker_.rank(prompt, ctx);

    std::vector<AttributeRef> expected;
    for (const auto& a : attrs) expected.push_back({req_.source_table->name, a});
    ParsedResponse parsed;
    try {
      parsed = parse_topk_response(raw, expected, req_.k, candidates, *req_.target);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnparseable) throw;
      parsed.diagnostics.push_back({DiagnosticKind::kUnparseable, req_.source_table->name, "",
                                    "no mapping object in response"});
      for (const auto& ref : expected) {
        parsed.diagnostics.push_back(
            {DiagnosticKind::kMissingRow, ref.table, ref.attribute, "absent from response"});
      }
    }
    if (req_.transcript) {
      req_.transcript->append(req_.source_table->name, prompt, raw, parsed.diagnostics);
    }
    return parsed;
  }

  ParsedResponse ask_in_batches(const std::vector<std::string>& attrs,
                                const CandidateSet& candidates) {
    const std::size_t budget = ranker_.context_budget_chars();
    std::vector<CandidateSet> batches;
    CandidateSet current{candidates.source_table, {}, {}};
    for (const auto& table : candidates.tables) {
      CandidateSet trial = current;
      trial.tables.push_back(table);
      if (build(attrs, trial).size_chars() <= budget) {
        current = std::move(trial);
        continue;
      }
      if (current.tables.empty()) {
        throw Error(ErrorCode::kContextOverflow,
                    "a single candidate table exceeds the prompt budget", table);
      }
      batches.push_back(std::move(current));
      current = CandidateSet{candidates.source_table, {table}, {}};
      if (build(attrs, current).size_chars() > budget) {
        throw Error(ErrorCode::kContextOverflow,
                    "a single candidate table exceeds the prompt budget", table);
      }
    }
    if (!current.tables.empty()) batches.push_back(std::move(current));

    std::vector<bool> winner(candidates.tables.size(), false);
    ParsedResponse last;
    for (const auto& batch : batches) {
      last = rank_and_parse(build(attrs, batch), attrs, batch);
      for (const auto& row : last.rows) {
        for (const auto& t : row.targets) {
          if (!t) continue;
          for (std::size_t i = 0; i < candidates.tables.size(); ++i) {
            if (same_name(candidates.tables[i], t->table) && batch.contains(t->table)) {
              winner[i] = true;
            }
          }
        }
      }
    }
    CandidateSet merged{candidates.source_table, {}, candidates.per_attribute_hits};
    for (std::size_t i = 0; i < candidates.tables.size(); ++i) {
      if (winner[i]) merged.tables.push_back(candidates.tables[i]);
    }
    if (merged.tables.empty()) return last;
    if (merged.tables.size() >= candidates.tables.size()) {
      throw Error(ErrorCode::kContextOverflow,
                  "batch winners do not fit the prompt budget", candidates.source_table);
    }
    return ask(attrs, merged);
  }

  const TopkRequest& req_;
  Ranker& ranker_;
  std::size_t calls_ = 0;
};

const RankedRow* find_row(const std::vector<RankedRow>& rows, std::string_view table,
                          std::string_view attr) {
  for (const auto& r : rows) {
    if (same_name(r.src_table, table) && same_name(r.src_attr, attr)) return &r;
  }
  return nullptr;
}

}  // namespace

TopkResult create_topk_mapping(const TopkRequest& req, Ranker& ranker) {
  if (!req.source || !req.source_table || !req.source_docs || !req.candidates ||
      !req.target || !req.target_docs) {
    throw Error(ErrorCode::kPrecondition, "incomplete top-k request");
  }
  if (req.candidates->tables.empty()) {
    throw Error(ErrorCode::kPrecondition, "empty candidate set", req.source_table->name);
  }
  if (req.k == 0) throw Error(ErrorCode::kPrecondition, "K must be at least 1");
  const Table& table = *req.source_table;

  TableRanker asker(req, ranker);
  std::vector<std::string> attrs;
  for (const auto& a : table.attributes) attrs.push_back(a.name);

  TopkResult result;
  ParsedResponse first = asker.ask(attrs, *req.candidates);
  result.diagnostics = first.diagnostics;

  std::vector<std::optional<RankedRow>> slots(attrs.size());
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (const RankedRow* r = find_row(first.rows, table.name, attrs[i])) {
      slots[i] = *r;
    } else {
      missing.push_back(attrs[i]);
    }
  }
  if (!missing.empty()) {
    ParsedResponse retry = asker.ask(missing, *req.candidates);
    result.diagnostics.insert(result.diagnostics.end(), retry.diagnostics.begin(),
                              retry.diagnostics.end());
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (slots[i]) continue;
      if (const RankedRow* r = find_row(retry.rows, table.name, attrs[i])) slots[i] = *r;
    }
  }

  for (std::size_t i = 0; i < attrs.size(); ++i) {
    RankedRow row;
    if (slots[i]) {
      row = std::move(*slots[i]);
    } else {
      row.unresolved = true;
      result.diagnostics.push_back({DiagnosticKind::kUnresolved, table.name, attrs[i],
                                    "no ranker answer after re-ask"});
    }
    row.src_table = table.name;
    row.src_attr = attrs[i];
    if (row.targets.size() > req.k) row.targets.resize(req.k);
    while (row.targets.size() < req.k) row.targets.push_back(std::nullopt);
    result.rows.push_back(std::move(row));
  }
  result.ranker_calls = asker.calls();
  return result;
}

}  // namespace rematch
