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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rematch/docgen.hpp"
#include "rematch/embedding.hpp"
#include "rematch/error.hpp"
#include "rematch/prediction.hpp"
#include "rematch/ranker.hpp"
#include "rematch/retrieval.hpp"
#include "rematch/schema.hpp"

namespace rematch {

struct PipelineConfig {
  std::size_t j = 1;
  std::size_t k = 1;
  DocMode doc_mode = DocMode::kFull;
  // false means J = infinity: every target table is a candidate.
  bool retrieval = true;
  EmbedderSpec embedder;
  RankerSpec ranker;
  std::vector<MatchPair> guidance;
  std::string tag;
  // Embedding cache directory; empty keeps the cache in memory.
  std::filesystem::path cache_dir;
  // Per-table results are persisted here and reused on the next run.
  std::filesystem::path checkpoint_dir;
  // JSONL audit log of ranker calls; empty disables it.
  std::filesystem::path transcript_path;

  void validate() const;
};

// Secrets never appear here: only the variable names that hold them.
nlohmann::json config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::json& j);

// Embedder and ranker shared across runs, e.g. across grid cells.
struct Backends {
  std::shared_ptr<Embedder> embedder;
  std::shared_ptr<Ranker> ranker;
};

// The embedding cache lives in config.cache_dir (or REMATCH_CACHE_DIR), and
// in memory when neither is set.
Backends make_backends(const PipelineConfig& config);
Backends make_backends(const PipelineConfig& config, std::shared_ptr<EmbeddingCache> cache);

struct RunObserver {
  // Called after each source table completes (including tables restored from
  // a checkpoint), possibly from worker threads but never concurrently.
  std::function<void(const TableRun& run, std::size_t done, std::size_t total)> on_table;
};

// Error raised when a run stops early. Completed tables are checkpointed and
// `resume_token` names the checkpoint directory to resume from.
class RunInterrupted : public Error {
 public:
  RunInterrupted(const Error& cause, std::filesystem::path resume_token,
                 std::size_t tables_done, std::size_t tables_total);

  const std::filesystem::path& resume_token() const { return resume_token_; }
  std::size_t tables_done() const { return done_; }
  std::size_t tables_total() const { return total_; }
  ErrorCode cause() const { return cause_; }

 private:
  std::filesystem::path resume_token_;
  std::size_t done_;
  std::size_t total_;
  ErrorCode cause_;
};

// Pairs whose target table is absent from `target` raise UnknownTargetTable.
// Pairs for other source tables and NA pairs leave the set unchanged.
CandidateSet apply_guidance(const CandidateSet& candidates,
                            const std::vector<MatchPair>& guidance,
                            const Schema& target);

// Checks that every guidance pair names an existing source attribute and an
// existing target attribute. Throws ValidationError naming the field.
void validate_guidance(const Schema& source, const Schema& target,
                       const std::vector<MatchPair>& guidance);

// One pair per source table: SUBJECT_ID when present and mapped, otherwise
// the first primary-key attribute with a non-NA mapping.
std::vector<MatchPair> auto_guidance(const Schema& source, const GroundTruth& truth);

PredictionMatrix run_rematch(const Schema& source, const Schema& target,
                             const PipelineConfig& config,
                             const Backends* backends = nullptr,
                             const RunObserver* observer = nullptr);

}  // namespace rematch
