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

#include "rematch/embedding.hpp"

#include <cmath>

#include "rematch/error.hpp"
#include "rematch/text.hpp"

namespace rematch {

double EmbeddingVector::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

bool EmbeddingVector::is_zero() const {
  for (double v : values) {
    if (v != 0.0) return false;
  }
  return true;
}

std::string EmbedderSpec::model_id() const {
  if (kind == EmbedderKind::kLocalHashTrigram) {
    return "hash-trigram-fnv1a64-d" + std::to_string(dim);
  }
  return remote.model.empty() ? "remote" : remote.model;
}

std::vector<EmbeddingVector> Embedder::embed_batch(
    const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed(t));
  return out;
}

HashTrigramEmbedder::HashTrigramEmbedder(std::size_t dim)
    : dim_(dim), model_id_("hash-trigram-fnv1a64-d" + std::to_string(dim)) {
  if (dim_ == 0) {
    throw Error(ErrorCode::kInvalidRequest, "embedding dimension must be positive");
  }
}

EmbeddingVector HashTrigramEmbedder::embed(std::string_view text) {
  EmbeddingVector vec;
  vec.model_id = model_id_;
  vec.values.assign(dim_, 0.0);
  if (text.empty()) {
    vec.empty_text = true;
    return vec;
  }
  const std::string folded = to_lower(text);
  const std::string_view view(folded);
  if (view.size() < 3) {
    vec.values[fnv1a64(view) % dim_] += 1.0;
  } else {
    for (std::size_t i = 0; i + 3 <= view.size(); ++i) {
      vec.values[fnv1a64(view.substr(i, 3)) % dim_] += 1.0;
    }
  }
  const double n = vec.norm();
  for (double& v : vec.values) v /= n;
  return vec;
}

std::unique_ptr<Embedder> make_embedder(const EmbedderSpec& spec) {
  if (spec.kind == EmbedderKind::kLocalHashTrigram) {
    return std::make_unique<HashTrigramEmbedder>(spec.dim);
  }
  return std::make_unique<RemoteEmbedder>(spec);
}

EmbeddingVector embed(Embedder& embedder, const Document& doc) {
  return embedder.embed(doc.text());
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dimensions " + std::to_string(a.dim()) + " and " +
                    std::to_string(b.dim()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kZeroVector, "cosine similarity of a zero vector");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace rematch
