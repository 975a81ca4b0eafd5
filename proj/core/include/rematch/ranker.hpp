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
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rematch/docgen.hpp"
#include "rematch/embedding.hpp"
#include "rematch/prediction.hpp"
#include "rematch/prompt.hpp"
#include "rematch/remote.hpp"

namespace rematch {

enum class RankerKind { kRemoteLlm, kLocalSimilarityOracle };

struct GenerationParams {
  int seed = 42;
  double temperature = 0.5;
  int max_tokens = 4096;
  double top_p = 0.9;
  double frequency_penalty = 0.0;
  double presence_penalty = 0.0;
};

struct RankerSpec {
  RankerKind kind = RankerKind::kLocalSimilarityOracle;
  RemoteSettings remote;
  GenerationParams generation;
  // Prompt size limit, measured in characters.
  std::size_t context_budget_chars = 100000;
  // Source tables ranked concurrently.
  std::size_t max_parallel_tables = 4;
};

// Structured view of what a prompt asks for. Remote rankers only need the
// prompt text; the local oracle ranks from these fields directly.
struct RankContext {
  const Schema* source = nullptr;
  const Table* source_table = nullptr;
  std::vector<std::string> attributes;
  const CandidateSet* candidates = nullptr;
  const Schema* target = nullptr;
  DocMode mode = DocMode::kFull;
  std::size_t k = 1;
  std::vector<MatchPair> guidance;
};

class Ranker {
 public:
  virtual ~Ranker() = default;
  // Raw response text in the expected output format.
  virtual std::string rank(const MatchPrompt& prompt, const RankContext& ctx) = 0;
  virtual std::size_t context_budget_chars() const = 0;
};

// POST {base}/chat/completions with a system and a user message.
class RemoteRanker final : public Ranker {
 public:
  explicit RemoteRanker(RankerSpec spec);

  std::string rank(const MatchPrompt& prompt, const RankContext& ctx) override;
  std::size_t context_budget_chars() const override { return spec_.context_budget_chars; }

  nlohmann::json request_body(const MatchPrompt& prompt) const;

 private:
  RankerSpec spec_;
};

// Offline stand-in for the generative ranker. For each source attribute it
// scores every attribute of the candidate tables by cosine similarity of
// their attribute documents and emits the K best, then a single (NA, NA) if
// fewer than K exist. Guidance acts as relevance feedback: the query vector
// is shifted toward the guided target tables, and a guided attribute gets its
// known target first.
class SimilarityOracleRanker final : public Ranker {
 public:
  SimilarityOracleRanker(std::shared_ptr<Embedder> embedder,
                         std::size_t context_budget_chars = 100000);

  std::string rank(const MatchPrompt& prompt, const RankContext& ctx) override;
  std::size_t context_budget_chars() const override { return budget_; }

 private:
  std::shared_ptr<Embedder> embedder_;
  std::size_t budget_;
};

std::unique_ptr<Ranker> make_ranker(const RankerSpec& spec,
                                    std::shared_ptr<Embedder> embedder);

// Renders rows in the single-quoted mapping format the prompt requests.
std::string format_topk_response(const std::vector<RankedRow>& rows);

// Append-only JSONL audit log of ranker calls.
class TranscriptLog {
 public:
  explicit TranscriptLog(std::filesystem::path file);

  void append(std::string_view source_table, const MatchPrompt& prompt,
              std::string_view raw_response,
              const std::vector<Diagnostic>& diagnostics);
  const std::filesystem::path& file() const { return file_; }

 private:
  std::filesystem::path file_;
  std::mutex mutex_;
};

}  // namespace rematch
