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

#include <cmath>

#include "http_client.hpp"
#include "parallel.hpp"
#include "rematch/embedding.hpp"
#include "rematch/error.hpp"

namespace rematch {

RemoteEmbedder::RemoteEmbedder(EmbedderSpec spec)
    : spec_(std::move(spec)), model_id_(spec_.model_id()), dim_(spec_.dim) {}

std::size_t RemoteEmbedder::dim() const {
  std::lock_guard lock(dim_mutex_);
  return dim_;
}

EmbeddingVector RemoteEmbedder::embed(std::string_view text) {
  return embed_batch({std::string(text)}).front();
}

std::vector<EmbeddingVector> RemoteEmbedder::embed_batch(
    const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out(texts.size());
  // Empty texts never reach the provider.
  std::vector<std::size_t> to_send;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) {
      out[i].model_id = model_id_;
      out[i].empty_text = true;
    } else {
      to_send.push_back(i);
    }
  }
  const std::size_t batch = std::max<std::size_t>(1, spec_.batch_size);
  const std::size_t n_batches = (to_send.size() + batch - 1) / batch;
  detail::parallel_for(n_batches, spec_.max_in_flight, [&](std::size_t b) {
    std::vector<std::string> chunk;
    const std::size_t begin = b * batch;
    const std::size_t end = std::min(to_send.size(), begin + batch);
    for (std::size_t i = begin; i < end; ++i) chunk.push_back(texts[to_send[i]]);
    auto vecs = request(chunk);
    for (std::size_t i = begin; i < end; ++i) out[to_send[i]] = std::move(vecs[i - begin]);
  });
  const std::size_t d = dim();
  for (auto& v : out) {
    if (v.empty_text) v.values.assign(d, 0.0);
  }
  return out;
}

std::vector<EmbeddingVector> RemoteEmbedder::request(
    const std::vector<std::string>& texts) {
  nlohmann::json body = {{"model", spec_.remote.model}, {"input", texts}};
  nlohmann::json resp = detail::post_json(spec_.remote, "/embeddings", body);
  std::vector<EmbeddingVector> out(texts.size());
  std::vector<bool> seen(texts.size(), false);
  try {
    for (const auto& item : resp.at("data")) {
      auto index = item.at("index").get<std::size_t>();
      if (index >= texts.size() || seen[index]) {
        throw RemoteError("embedding response has bad index " + std::to_string(index), 200, 1);
      }
      seen[index] = true;
      out[index].model_id = model_id_;
      out[index].values = item.at("embedding").get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw RemoteError(std::string("unexpected embeddings response: ") + e.what(), 200, 1);
  }
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (!seen[i]) {
      throw RemoteError("embedding response missing index " + std::to_string(i), 200, 1);
    }
    auto& v = out[i];
    std::lock_guard lock(dim_mutex_);
    if (dim_ == 0) dim_ = v.dim();
    if (v.dim() != dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "provider returned dim " + std::to_string(v.dim()) +
                      ", expected " + std::to_string(dim_));
    }
    for (double x : v.values) {
      if (!std::isfinite(x)) throw RemoteError("non-finite embedding value", 200, 1);
    }
  }
  return out;
}

}  // namespace rematch
