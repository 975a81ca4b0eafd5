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

#include "rematch/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <mutex>

#include "parallel.hpp"
#include "rematch/error.hpp"
#include "rematch/manifest.hpp"
#include "rematch/text.hpp"
#include "rematch/topk_mapping.hpp"

namespace rematch {

using nlohmann::json;

namespace {

json remote_to_json(const RemoteSettings& r) {
  return {{"base_url", r.base_url},
          {"model", r.model},
          {"api_key_env", r.api_key_env},
          {"max_attempts", r.max_attempts},
          {"initial_backoff_seconds", r.initial_backoff_seconds},
          {"max_backoff_seconds", r.max_backoff_seconds},
          {"timeout_seconds", r.timeout_seconds}};
}

RemoteSettings remote_from_json(const json& j) {
  RemoteSettings r;
  if (!j.is_object()) return r;
  r.base_url = j.value("base_url", r.base_url);
  r.model = j.value("model", r.model);
  r.api_key_env = j.value("api_key_env", r.api_key_env);
  r.max_attempts = j.value("max_attempts", r.max_attempts);
  r.initial_backoff_seconds = j.value("initial_backoff_seconds", r.initial_backoff_seconds);
  r.max_backoff_seconds = j.value("max_backoff_seconds", r.max_backoff_seconds);
  r.timeout_seconds = j.value("timeout_seconds", r.timeout_seconds);
  return r;
}

json pair_to_json(const MatchPair& p) {
  json j = {{"src_table", p.source.table}, {"src_attr", p.source.attribute}};
  j["tgt_table"] = p.target ? json(p.target->table) : json(nullptr);
  j["tgt_attr"] = p.target ? json(p.target->attribute) : json(nullptr);
  return j;
}

MatchPair pair_from_json(const json& j) {
  MatchPair p;
  p.source = {j.at("src_table").get<std::string>(), j.at("src_attr").get<std::string>()};
  const json& t = j.contains("tgt_table") ? j.at("tgt_table") : json(nullptr);
  const json& a = j.contains("tgt_attr") ? j.at("tgt_attr") : json(nullptr);
  if (t.is_string() && a.is_string() && !same_name(t.get<std::string>(), "NA")) {
    p.target = AttributeRef{t.get<std::string>(), a.get<std::string>()};
  }
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Identifies the inputs a checkpoint is valid for.
std::string run_fingerprint(const Schema& source, const Schema& target,
                            const PipelineConfig& config) {
  json cfg = config_to_json(config);
  cfg.erase("tag");
  cfg.erase("cache_dir");
  cfg.erase("checkpoint_dir");
  cfg.erase("transcript_path");
  cfg["ranker"].erase("max_parallel_tables");
  return sha256_hex(cfg.dump() + schema_to_json(source).dump() +
                    schema_to_json(target).dump());
}

struct TableResult {
  TableRun run;
  std::vector<RankedRow> rows;
};

class Checkpoint {
 public:
  Checkpoint(std::filesystem::path dir, const std::string& fingerprint) : dir_(std::move(dir)) {
    if (dir_.empty()) return;
    const auto meta = dir_ / "checkpoint.json";
    if (std::filesystem::exists(meta)) {
      auto j = json::parse(read_file(meta));
      if (j.value("fingerprint", "") != fingerprint) {
        throw Error(ErrorCode::kConflict,
                    "checkpoint belongs to a different configuration or schema pair",
                    dir_.string());
      }
    } else {
      write_file(meta, json{{"fingerprint", fingerprint}}.dump(2) + "\n");
    }
  }

  bool enabled() const { return !dir_.empty(); }

  std::optional<TableResult> load(std::size_t index, const std::string& table) const {
    if (!enabled()) return std::nullopt;
    const auto file = path_for(index);
    if (!std::filesystem::exists(file)) return std::nullopt;
    try {
      auto j = json::parse(read_file(file));
      TableResult r{table_run_from_json(j.at("run")), {}};
      if (!same_name(r.run.source_table, table)) return std::nullopt;
      for (const auto& row : j.at("rows")) r.rows.push_back(ranked_row_from_json(row));
      return r;
    } catch (const json::exception&) {
      return std::nullopt;  // torn write; recompute the table
    }
  }

  void save(std::size_t index, const TableResult& r) const {
    if (!enabled()) return;
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back(ranked_row_to_json(row));
    const auto file = path_for(index);
    const auto tmp = file.string() + ".tmp";
    write_file(tmp, dump_json({{"run", table_run_to_json(r.run)}, {"rows", rows}}));
    std::filesystem::rename(tmp, file);
  }

 private:
  std::filesystem::path path_for(std::size_t index) const {
    return dir_ / ("table_" + std::to_string(index) + ".json");
  }

  std::filesystem::path dir_;
};

}  // namespace

void PipelineConfig::validate() const {
  if (k == 0) throw Error(ErrorCode::kValidation, "K must be at least 1", "k");
  if (retrieval && j == 0) {
    throw Error(ErrorCode::kValidation, "J must be at least 1 when retrieval is on", "j");
  }
  if (embedder.kind == EmbedderKind::kLocalHashTrigram && embedder.dim == 0) {
    throw Error(ErrorCode::kValidation, "embedding dimension must be positive", "embedder.dim");
  }
  if (ranker.context_budget_chars == 0) {
    throw Error(ErrorCode::kValidation, "context budget must be positive",
                "ranker.context_budget_chars");
  }
}

json config_to_json(const PipelineConfig& c) {
  json guidance = json::array();
  for (const auto& p : c.guidance) guidance.push_back(pair_to_json(p));
  const auto& g = c.ranker.generation;
  return {
      {"j", c.retrieval ? json(c.j) : json(nullptr)},
      {"k", c.k},
      {"doc_mode", doc_mode_name(c.doc_mode)},
      {"retrieval", c.retrieval},
      {"embedder",
       {{"kind", c.embedder.kind == EmbedderKind::kRemote ? "remote" : "hash"},
        {"dim", c.embedder.dim},
        {"model_id", c.embedder.model_id()},
        {"batch_size", c.embedder.batch_size},
        {"max_in_flight", c.embedder.max_in_flight},
        {"remote", remote_to_json(c.embedder.remote)}}},
      {"ranker",
       {{"kind", c.ranker.kind == RankerKind::kRemoteLlm ? "remote" : "oracle"},
        {"generation",
         {{"seed", g.seed},
          {"temperature", g.temperature},
          {"max_tokens", g.max_tokens},
          {"top_p", g.top_p},
          {"frequency_penalty", g.frequency_penalty},
          {"presence_penalty", g.presence_penalty}}},
        {"context_budget_chars", c.ranker.context_budget_chars},
        {"max_parallel_tables", c.ranker.max_parallel_tables},
        {"remote", remote_to_json(c.ranker.remote)}}},
      {"guidance", guidance},
      {"tag", c.tag},
      {"cache_dir", c.cache_dir.string()},
      {"checkpoint_dir", c.checkpoint_dir.string()},
      {"transcript_path", c.transcript_path.string()},
  };
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  if (!j.is_object()) throw Error(ErrorCode::kParse, "config must be an object");
  try {
    c.retrieval = j.value("retrieval", true);
    if (j.contains("j") && !j.at("j").is_null()) {
      c.j = j.at("j").get<std::size_t>();
    } else if (j.contains("j")) {
      c.retrieval = false;
    }
    c.k = j.value("k", c.k);
    c.doc_mode = parse_doc_mode(j.value("doc_mode", std::string("full")));
    if (auto e = j.find("embedder"); e != j.end() && e->is_object()) {
      const std::string kind = e->value("kind", std::string("hash"));
      c.embedder.kind = (kind == "remote") ? EmbedderKind::kRemote : EmbedderKind::kLocalHashTrigram;
      c.embedder.dim = e->value("dim", c.embedder.dim);
      c.embedder.batch_size = e->value("batch_size", c.embedder.batch_size);
      c.embedder.max_in_flight = e->value("max_in_flight", c.embedder.max_in_flight);
      if (e->contains("remote")) c.embedder.remote = remote_from_json(e->at("remote"));
    }
    if (auto r = j.find("ranker"); r != j.end() && r->is_object()) {
      const std::string kind = r->value("kind", std::string("oracle"));
      c.ranker.kind = (kind == "remote") ? RankerKind::kRemoteLlm : RankerKind::kLocalSimilarityOracle;
      if (auto g = r->find("generation"); g != r->end() && g->is_object()) {
        auto& gp = c.ranker.generation;
        gp.seed = g->value("seed", gp.seed);
        gp.temperature = g->value("temperature", gp.temperature);
        gp.max_tokens = g->value("max_tokens", gp.max_tokens);
        gp.top_p = g->value("top_p", gp.top_p);
        gp.frequency_penalty = g->value("frequency_penalty", gp.frequency_penalty);
        gp.presence_penalty = g->value("presence_penalty", gp.presence_penalty);
      }
      c.ranker.context_budget_chars = r->value("context_budget_chars", c.ranker.context_budget_chars);
      c.ranker.max_parallel_tables = r->value("max_parallel_tables", c.ranker.max_parallel_tables);
      if (r->contains("remote")) c.ranker.remote = remote_from_json(r->at("remote"));
    }
    for (const auto& p : j.value("guidance", json::array())) c.guidance.push_back(pair_from_json(p));
    c.tag = j.value("tag", "");
    c.cache_dir = j.value("cache_dir", "");
    c.checkpoint_dir = j.value("checkpoint_dir", "");
    c.transcript_path = j.value("transcript_path", "");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad config: ") + e.what());
  }
  return c;
}

Backends make_backends(const PipelineConfig& config) {
  std::filesystem::path dir = config.cache_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("REMATCH_CACHE_DIR")) dir = env;
  }
  return make_backends(config, dir.empty()
                                   ? std::make_shared<EmbeddingCache>()
                                   : std::make_shared<EmbeddingCache>(dir / "embeddings.jsonl"));
}

Backends make_backends(const PipelineConfig& config, std::shared_ptr<EmbeddingCache> cache) {
  EmbedderSpec spec = config.embedder;
  if (spec.kind == EmbedderKind::kRemote) {
    spec.remote = remote_settings_from_env(spec.remote, "REMATCH_EMBED_MODEL");
  }
  Backends b;
  b.embedder = std::make_shared<CachingEmbedder>(make_embedder(spec), std::move(cache));
  RankerSpec rspec = config.ranker;
  if (rspec.kind == RankerKind::kRemoteLlm) {
    rspec.remote = remote_settings_from_env(rspec.remote, "REMATCH_GEN_MODEL");
  }
  b.ranker = make_ranker(rspec, b.embedder);
  return b;
}

RunInterrupted::RunInterrupted(const Error& cause, std::filesystem::path resume_token,
                               std::size_t tables_done, std::size_t tables_total)
    : Error(cause.code(),
            cause.message() + " (" + std::to_string(tables_done) + "/" +
                std::to_string(tables_total) + " tables completed" +
                (resume_token.empty() ? std::string(")")
                                      : "; resume from " + resume_token.string() + ")"),
            cause.where()),
      resume_token_(std::move(resume_token)),
      done_(tables_done),
      total_(tables_total),
      cause_(cause.code()) {}

PredictionMatrix run_rematch(const Schema& source, const Schema& target,
                             const PipelineConfig& config, const Backends* backends,
                             const RunObserver* observer) {
  config.validate();
  validate_guidance(source, target, config.guidance);
  Backends owned;
  if (!backends) {
    owned = make_backends(config);
    backends = &owned;
  }
  Embedder& embedder = *backends->embedder;
  Ranker& ranker = *backends->ranker;

  const Corpora corpora = build_corpora(source, target, config.doc_mode);

  std::unique_ptr<TranscriptLog> transcript;
  if (!config.transcript_path.empty()) {
    transcript = std::make_unique<TranscriptLog>(config.transcript_path);
  }
  const Checkpoint checkpoint(config.checkpoint_dir, run_fingerprint(source, target, config));

  const std::size_t n_tables = source.tables.size();
  std::vector<std::optional<TableResult>> results(n_tables);
  std::mutex progress_mutex;
  std::size_t done = 0;
  auto report = [&](std::size_t i) {
    std::lock_guard lock(progress_mutex);
    ++done;
    if (observer && observer->on_table) observer->on_table(results[i]->run, done, n_tables);
  };
  for (std::size_t i = 0; i < n_tables; ++i) {
    results[i] = checkpoint.load(i, source.tables[i].name);
    if (results[i]) report(i);
  }

  // Target table documents are embedded once, unless every table was restored.
  std::vector<NamedVector> target_vecs;
  if (config.retrieval && done < n_tables) {
    std::vector<std::string> texts;
    for (const auto& doc : corpora.target_tables.documents()) texts.push_back(doc.text());
    try {
      auto vecs = embedder.embed_batch(texts);
      for (std::size_t i = 0; i < vecs.size(); ++i) {
        target_vecs.push_back({target.tables[i].name, std::move(vecs[i])});
      }
    } catch (const Error& e) {
      throw RunInterrupted(e, config.checkpoint_dir, done, n_tables);
    }
  }

  auto process = [&](std::size_t i) {
    if (results[i]) return;
    const auto t0 = std::chrono::steady_clock::now();
    const Table& table = source.tables[i];
    CandidateSet candidates;
    if (config.retrieval) {
      std::vector<std::string> keys, texts;
      for (const auto& a : table.attributes) {
        const auto key = DocOrigin{source.name, table.name, a.name}.key();
        texts.push_back(corpora.source_attributes.find(key)->text());
        keys.push_back(key);
      }
      auto vecs = embedder.embed_batch(texts);
      EmbeddingIndex index;
      for (std::size_t a = 0; a < keys.size(); ++a) index.emplace(keys[a], std::move(vecs[a]));
      candidates = build_candidate_set(source, table, index, target_vecs, config.j);
    } else {
      candidates = all_tables_candidate_set(table, target);
    }
    candidates = apply_guidance(candidates, config.guidance, target);

    TopkRequest req;
    req.source = &source;
    req.source_table = &table;
    req.source_docs = &corpora.source_attributes;
    req.candidates = &candidates;
    req.target = &target;
    req.target_docs = &corpora.target_tables;
    req.mode = config.doc_mode;
    req.k = config.k;
    req.guidance = config.guidance;
    req.transcript = transcript.get();
    TopkResult mapped = create_topk_mapping(req, ranker);

    TableResult r;
    r.run.source_table = table.name;
    r.run.candidate_tables = candidates.tables;
    r.run.ranker_calls = mapped.ranker_calls;
    r.run.diagnostics = std::move(mapped.diagnostics);
    r.rows = std::move(mapped.rows);
    r.run.seconds = seconds_since(t0);
    checkpoint.save(i, r);
    results[i] = std::move(r);
    report(i);
  };

  try {
    detail::parallel_for(n_tables, config.ranker.max_parallel_tables, process);
  } catch (const RunInterrupted&) {
    throw;
  } catch (const Error& e) {
    std::lock_guard lock(progress_mutex);
    throw RunInterrupted(e, config.checkpoint_dir, done, n_tables);
  }

  PredictionMatrix m;
  m.k = config.k;
  m.config = config_to_json(config);
  m.config["source_schema"] = source.name;
  m.config["target_schema"] = target.name;
  for (auto& r : results) {
    m.tables.push_back(std::move(r->run));
    for (auto& row : r->rows) m.rows.push_back(std::move(row));
  }
  return m;
}

}  // namespace rematch
