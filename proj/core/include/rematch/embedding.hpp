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
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rematch/docgen.hpp"
#include "rematch/remote.hpp"

namespace rematch {

struct EmbeddingVector {
  std::vector<double> values;
  std::string model_id;
  // Set when the input text was empty; values are then all zero.
  bool empty_text = false;

  std::size_t dim() const { return values.size(); }
  double norm() const;
  bool is_zero() const;
};

enum class EmbedderKind { kLocalHashTrigram, kRemote };

struct EmbedderSpec {
  EmbedderKind kind = EmbedderKind::kLocalHashTrigram;
  // 0 for a remote embedder means "whatever the provider returns", pinned on
  // the first response.
  std::size_t dim = 1024;
  RemoteSettings remote;
  std::size_t batch_size = 64;
  std::size_t max_in_flight = 8;

  std::string model_id() const;
};

class Embedder {
 public:
  virtual ~Embedder() = default;

  virtual const std::string& model_id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual EmbeddingVector embed(std::string_view text) = 0;
  // Default issues one embed() per text.
  virtual std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts);
};

// Lowercases the text, hashes every byte trigram with FNV-1a into `dim`
// buckets, and L2-normalizes the counts. Texts shorter than three bytes hash
// as a single gram.
class HashTrigramEmbedder final : public Embedder {
 public:
  explicit HashTrigramEmbedder(std::size_t dim = 1024);

  const std::string& model_id() const override { return model_id_; }
  std::size_t dim() const override { return dim_; }
  EmbeddingVector embed(std::string_view text) override;

 private:
  std::size_t dim_;
  std::string model_id_;
};

// POST {base}/embeddings with {model, input:[...]}; batches are sent with
// bounded parallelism.
class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(EmbedderSpec spec);

  const std::string& model_id() const override { return model_id_; }
  std::size_t dim() const override;
  EmbeddingVector embed(std::string_view text) override;
  std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) override;

 private:
  std::vector<EmbeddingVector> request(const std::vector<std::string>& texts);

  EmbedderSpec spec_;
  std::string model_id_;
  mutable std::mutex dim_mutex_;
  std::size_t dim_;
};

// Append-only JSONL store of {model_id, content_hash, dim, values}. Reads are
// concurrent; writes are serialized.
class EmbeddingCache {
 public:
  EmbeddingCache() = default;  // memory only
  explicit EmbeddingCache(std::filesystem::path file);

  static std::string content_hash(std::string_view text);

  bool lookup(const std::string& model_id, const std::string& hash,
              EmbeddingVector* out) const;
  void store(const std::string& hash, const EmbeddingVector& vec);
  std::size_t size() const;
  const std::filesystem::path& file() const { return file_; }

 private:
  std::filesystem::path file_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, EmbeddingVector> entries_;
};

// Serves repeated texts from the cache and forwards misses in one batch.
class CachingEmbedder final : public Embedder {
 public:
  CachingEmbedder(std::unique_ptr<Embedder> inner,
                  std::shared_ptr<EmbeddingCache> cache);

  const std::string& model_id() const override { return inner_->model_id(); }
  std::size_t dim() const override { return inner_->dim(); }
  EmbeddingVector embed(std::string_view text) override;
  std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) override;

  // Distinct non-empty texts that had to be embedded by the inner embedder.
  std::size_t misses() const { return misses_; }
  EmbeddingCache& cache() { return *cache_; }

 private:
  std::unique_ptr<Embedder> inner_;
  std::shared_ptr<EmbeddingCache> cache_;
  std::mutex miss_mutex_;
  std::size_t misses_ = 0;
};

std::unique_ptr<Embedder> make_embedder(const EmbedderSpec& spec);

EmbeddingVector embed(Embedder& embedder, const Document& doc);

// dot(a, b) / (|a| |b|).
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace rematch
