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

#include "rematch/ranker.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <numeric>

#include "http_client.hpp"
#include "rematch/error.hpp"
#include "rematch/text.hpp"

namespace rematch {

namespace {

void check_budget(const MatchPrompt& prompt, std::size_t budget) {
  if (prompt.size_chars() > budget) {
    throw Error(ErrorCode::kContextOverflow,
                "prompt has " + std::to_string(prompt.size_chars()) +
                    " characters, budget is " + std::to_string(budget),
                prompt.source_table);
  }
}

std::string quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "'";
}

}  // namespace

RemoteRanker::RemoteRanker(RankerSpec spec) : spec_(std::move(spec)) {}

nlohmann::json RemoteRanker::request_body(const MatchPrompt& prompt) const {
  const auto& g = spec_.generation;
  return {{"model", spec_.remote.model},
          {"messages",
           nlohmann::json::array({{{"role", "system"}, {"content", prompt.system_text}},
                                  {{"role", "user"}, {"content", prompt.user_text}}})},
          {"temperature", g.temperature},
          {"top_p", g.top_p},
          {"max_tokens", g.max_tokens},
          {"seed", g.seed},
          {"frequency_penalty", g.frequency_penalty},
          {"presence_penalty", g.presence_penalty}};
}

std::string RemoteRanker::rank(const MatchPrompt& prompt, const RankContext&) {
  check_budget(prompt, spec_.context_budget_chars);
  nlohmann::json resp = detail::post_json(spec_.remote, "/chat/completions",
                                          request_body(prompt));
  try {
    const auto& content = resp.at("choices").at(0).at("message").at("content");
    return content.is_string() ? content.get<std::string>() : std::string();
  } catch (const nlohmann::json::exception& e) {
    throw RemoteError(std::string("unexpected completion response: ") + e.what(), 200, 1);
  }
}

SimilarityOracleRanker::SimilarityOracleRanker(std::shared_ptr<Embedder> embedder,
                                               std::size_t context_budget_chars)
    : embedder_(std::move(embedder)), budget_(context_budget_chars) {
  if (!embedder_) throw Error(ErrorCode::kPrecondition, "oracle ranker needs an embedder");
}

std::string SimilarityOracleRanker::rank(const MatchPrompt& prompt, const RankContext& ctx) {
  check_budget(prompt, budget_);
  if (!ctx.source || !ctx.source_table || !ctx.candidates || !ctx.target) {
    throw Error(ErrorCode::kPrecondition, "oracle ranker needs a structured context");
  }
  const Table& table = *ctx.source_table;

  // Candidate target attributes in candidate-table order.
  struct Candidate {
    AttributeRef ref;
    std::string text;
  };
  std::vector<Candidate> pool;
  std::vector<std::string> guided_table_texts;
  for (const auto& name : ctx.candidates->tables) {
    const Table* t = ctx.target->find_table(name);
    if (!t) throw Error(ErrorCode::kMissingDocument, "candidate table not in target", name);
    for (const auto& a : t->attributes) {
      pool.push_back({{t->name, a.name},
                      attribute_to_doc(*ctx.target, *t, a, ctx.mode).text()});
    }
  }
  std::vector<const MatchPair*> guidance;
  for (const auto& g : ctx.guidance) {
    if (g.target && same_name(g.source.table, table.name)) {
      guidance.push_back(&g);
      if (const Table* gt = ctx.target->find_table(g.target->table)) {
        guided_table_texts.push_back(table_to_doc(*ctx.target, *gt, ctx.mode).text());
      }
    }
  }

  std::vector<std::string> texts;
  texts.reserve(pool.size() + guided_table_texts.size() + ctx.attributes.size());
  for (const auto& c : pool) texts.push_back(c.text);
  for (const auto& t : guided_table_texts) texts.push_back(t);
  for (const auto& name : ctx.attributes) {
    const Attribute* a = table.find_attribute(name);
    if (!a) throw Error(ErrorCode::kPrecondition, "attribute not in source table", name);
    texts.push_back(attribute_to_doc(*ctx.source, table, *a, ctx.mode).text());
  }
  auto vecs = embedder_->embed_batch(texts);
  const std::size_t n_pool = pool.size();
  const std::size_t n_guided = guided_table_texts.size();

  // Relevance feedback: mean direction of the guided target tables.
  std::vector<double> feedback;
  if (n_guided > 0) {
    feedback.assign(embedder_->dim(), 0.0);
    for (std::size_t g = 0; g < n_guided; ++g) {
      const auto& v = vecs[n_pool + g].values;
      const double n = vecs[n_pool + g].norm();
      for (std::size_t d = 0; d < v.size() && d < feedback.size(); ++d) {
        feedback[d] += v[d] / (n * static_cast<double>(n_guided));
      }
    }
  }

  std::vector<RankedRow> rows;
  for (std::size_t ai = 0; ai < ctx.attributes.size(); ++ai) {
    const std::string& attr_name = ctx.attributes[ai];
    EmbeddingVector query = vecs[n_pool + n_guided + ai];
    if (!feedback.empty()) {
      const double n = query.norm();
      for (std::size_t d = 0; d < query.values.size(); ++d) {
        query.values[d] = query.values[d] / n + feedback[d];
      }
    }
    std::vector<double> scores(n_pool);
    for (std::size_t p = 0; p < n_pool; ++p) scores[p] = cosine_similarity(query, vecs[p]);
    std::vector<std::size_t> order(n_pool);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RankedRow row{table.name, attr_name, {}, false};
    for (const MatchPair* g : guidance) {
      if (same_name(g->source.attribute, attr_name)) row.targets.push_back(*g->target);
    }
    for (std::size_t p : order) {
      if (row.targets.size() >= ctx.k) break;
      bool dup = std::any_of(row.targets.begin(), row.targets.end(), [&](const MatchTarget& t) {
        return same_target(t, pool[p].ref);
      });
      if (!dup) row.targets.push_back(pool[p].ref);
    }
    if (row.targets.size() > ctx.k) row.targets.resize(ctx.k);
    if (row.targets.size() < ctx.k) row.targets.push_back(std::nullopt);
    rows.push_back(std::move(row));
  }
  return format_topk_response(rows);
}

std::unique_ptr<Ranker> make_ranker(const RankerSpec& spec,
                                    std::shared_ptr<Embedder> embedder) {
  if (spec.kind == RankerKind::kRemoteLlm) return std::make_unique<RemoteRanker>(spec);
  return std::make_unique<SimilarityOracleRanker>(std::move(embedder),
                                                  spec.context_budget_chars);
}

std::string format_topk_response(const std::vector<RankedRow>& rows) {
  std::string out = "{";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (r) out += ",\n ";
    out += quote(std::to_string(r + 1)) + ": {'SRC_ENT': " + quote(row.src_table) +
           ", 'SRC_ATT': " + quote(row.src_attr);
    for (std::size_t i = 0; i < row.targets.size(); ++i) {
      const std::string n = std::to_string(i + 1);
      const auto& t = row.targets[i];
      out += ", 'TGT_ENT" + n + "': " + quote(t ? t->table : "NA");
      out += ", 'TGT_ATT" + n + "': " + quote(t ? t->attribute : "NA");
    }
    out += "}";
  }
  return out + "}";
}

TranscriptLog::TranscriptLog(std::filesystem::path file) : file_(std::move(file)) {}

void TranscriptLog::append(std::string_view source_table, const MatchPrompt& prompt,
                           std::string_view raw_response,
                           const std::vector<Diagnostic>& diagnostics) {
  nlohmann::json diags = nlohmann::json::array();
  for (const auto& d : diagnostics) diags.push_back(diagnostic_to_json(d));
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);
  nlohmann::json rec = {{"timestamp", stamp},
                        {"source_table", source_table},
                        {"prompt_hash", prompt.hash()},
                        {"prompt_chars", prompt.size_chars()},
                        {"raw_response", raw_response},
                        {"diagnostics", diags}};
  std::lock_guard lock(mutex_);
  if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
  std::ofstream out(file_, std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append transcript", file_.string());
  out << rec.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

}  // namespace rematch
