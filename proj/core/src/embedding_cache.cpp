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

#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "rematch/embedding.hpp"
#include "rematch/error.hpp"
#include "rematch/text.hpp"

namespace rematch {

namespace {

std::string entry_key(const std::string& model_id, const std::string& hash) {
  return model_id + '\x1f' + hash;
}

}  // namespace

EmbeddingCache::EmbeddingCache(std::filesystem::path file) : file_(std::move(file)) {
  if (!std::filesystem::exists(file_)) return;
  std::ifstream in(file_);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto rec = nlohmann::json::parse(line);
      EmbeddingVector vec;
      vec.model_id = rec.at("model_id").get<std::string>();
      vec.values = rec.at("values").get<std::vector<double>>();
      if (vec.values.size() != rec.at("dim").get<std::size_t>()) continue;
      entries_[entry_key(vec.model_id, rec.at("content_hash").get<std::string>())] =
          std::move(vec);
    } catch (const nlohmann::json::exception&) {
      // A torn final line from an interrupted append; later lines still load.
      continue;
    }
  }
}

std::string EmbeddingCache::content_hash(std::string_view text) {
  return sha256_hex(text);
}

bool EmbeddingCache::lookup(const std::string& model_id, const std::string& hash,
                            EmbeddingVector* out) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(entry_key(model_id, hash));
  if (it == entries_.end()) return false;
  *out = it->second;
  return true;
}

void EmbeddingCache::store(const std::string& hash, const EmbeddingVector& vec) {
  std::unique_lock lock(mutex_);
  auto [it, inserted] = entries_.emplace(entry_key(vec.model_id, hash), vec);
  if (!inserted || file_.empty()) return;
  if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
  std::ofstream out(file_, std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to embedding cache", file_.string());
  nlohmann::json rec = {{"model_id", vec.model_id},
                        {"content_hash", hash},
                        {"dim", vec.dim()},
                        {"values", vec.values}};
  out << rec.dump() << '\n';
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

CachingEmbedder::CachingEmbedder(std::unique_ptr<Embedder> inner,
                                 std::shared_ptr<EmbeddingCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {
  if (!cache_) cache_ = std::make_shared<EmbeddingCache>();
}

EmbeddingVector CachingEmbedder::embed(std::string_view text) {
  return embed_batch({std::string(text)}).front();
}

std::vector<EmbeddingVector> CachingEmbedder::embed_batch(
    const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out(texts.size());
  std::vector<std::string> hashes(texts.size());
  // Distinct missing texts, each forwarded once; `waiting` maps them back.
  std::unordered_map<std::string, std::size_t> pending;
  std::vector<std::string> missing_texts;
  std::vector<std::pair<std::size_t, std::size_t>> waiting;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    hashes[i] = EmbeddingCache::content_hash(texts[i]);
    if (cache_->lookup(inner_->model_id(), hashes[i], &out[i])) continue;
    auto [it, inserted] = pending.emplace(hashes[i], missing_texts.size());
    if (inserted) missing_texts.push_back(texts[i]);
    waiting.emplace_back(i, it->second);
  }
  if (missing_texts.empty()) return out;
  auto fresh = inner_->embed_batch(missing_texts);
  std::size_t stored = 0;
  for (std::size_t m = 0; m < fresh.size(); ++m) {
    // Empty-text zero vectors are flagged, not cached.
    if (fresh[m].empty_text) continue;
    cache_->store(EmbeddingCache::content_hash(missing_texts[m]), fresh[m]);
    ++stored;
  }
  {
    std::lock_guard lock(miss_mutex_);
    misses_ += stored;
  }
  for (const auto& [i, m] : waiting) out[i] = fresh[m];
  return out;
}

}  // namespace rematch
