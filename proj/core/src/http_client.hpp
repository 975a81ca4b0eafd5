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

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rematch/remote.hpp"

namespace rematch::detail {

struct BaseUrl {
  std::string origin;       // scheme://host[:port]
  std::string path_prefix;  // no trailing slash
};

BaseUrl split_base_url(std::string_view url);

// POSTs a JSON body with bearer auth. Transport failures, 429 and 5xx are
// retried with exponential backoff (Retry-After honored); other non-2xx
// statuses fail immediately. Throws RemoteError.
nlohmann::json post_json(const RemoteSettings& settings, std::string_view path,
                         const nlohmann::json& body);

}  // namespace rematch::detail
