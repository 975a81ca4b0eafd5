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

#include "http_client.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "rematch/error.hpp"

namespace rematch {

RemoteSettings remote_settings_from_env(RemoteSettings settings,
                                        const char* model_env) {
  if (settings.base_url.empty()) {
    if (const char* base = std::getenv("REMATCH_API_BASE")) settings.base_url = base;
  }
  if (settings.model.empty() && model_env != nullptr) {
    if (const char* model = std::getenv(model_env)) settings.model = model;
  }
  return settings;
}

namespace detail {

BaseUrl split_base_url(std::string_view url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidRequest,
                "base URL must include a scheme: " + std::string(url));
  }
  auto path_start = url.find('/', scheme_end + 3);
  BaseUrl out;
  if (path_start == std::string_view::npos) {
    out.origin = std::string(url);
  } else {
    out.origin = std::string(url.substr(0, path_start));
    out.path_prefix = std::string(url.substr(path_start));
    while (!out.path_prefix.empty() && out.path_prefix.back() == '/') {
      out.path_prefix.pop_back();
    }
  }
  return out;
}

namespace {

double parse_retry_after(const httplib::Result& res) {
  if (!res || !res->has_header("Retry-After")) return 0.0;
  try {
    return std::max(0.0, std::stod(res->get_header_value("Retry-After")));
  } catch (...) {
    return 0.0;
  }
}

}  // namespace

nlohmann::json post_json(const RemoteSettings& settings, std::string_view path,
                         const nlohmann::json& body) {
  if (settings.base_url.empty()) {
    throw RemoteError("no base URL configured (set REMATCH_API_BASE)", 0, 0);
  }
  const BaseUrl base = split_base_url(settings.base_url);
  httplib::Client client(base.origin);
  const auto timeout = std::chrono::duration<double>(settings.timeout_seconds);
  client.set_connection_timeout(
      std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

  httplib::Headers headers;
  if (const char* key = std::getenv(settings.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string full_path = base.path_prefix + std::string(path);
  const std::string payload = body.dump();

  const int attempts = std::max(1, settings.max_attempts);
  double backoff = settings.initial_backoff_seconds;
  std::string last_error;
  int last_status = 0;
  double last_retry_after = 0.0;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    auto res = client.Post(full_path, headers, payload, "application/json");
    if (res && res->status >= 200 && res->status < 300) {
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw RemoteError(std::string("malformed JSON from provider: ") + e.what(),
                          res->status, attempt);
      }
    }
    bool retryable = true;
    if (!res) {
      last_status = 0;
      last_error = "transport error: " + httplib::to_string(res.error());
    } else {
      last_status = res->status;
      last_error = "HTTP " + std::to_string(res->status) + ": " +
                   res->body.substr(0, 512);
      retryable = res->status == 429 || res->status >= 500;
    }
    last_retry_after = parse_retry_after(res);
    if (!retryable || attempt == attempts) {
      throw RemoteError(last_error, last_status, attempt, last_retry_after);
    }
    double wait = std::min(std::max(backoff, last_retry_after),
                           settings.max_backoff_seconds);
    std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    backoff *= 2.0;
  }
  throw RemoteError(last_error, last_status, attempts, last_retry_after);
}

}  // namespace detail
}  // namespace rematch
