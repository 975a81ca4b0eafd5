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

namespace rematch {

// Connection settings shared by the remote embedder and the remote ranker.
// Secrets are never stored here; only the name of the variable holding them.
struct RemoteSettings {
  std::string base_url;                  // e.g. https://api.example.com/v1
  std::string model;
  std::string api_key_env = "REMATCH_API_KEY";
  int max_attempts = 3;
  double initial_backoff_seconds = 1.0;
  double max_backoff_seconds = 30.0;
  double timeout_seconds = 120.0;
};

// Fills base_url/model from REMATCH_API_BASE and the given model variable
// when they are empty.
RemoteSettings remote_settings_from_env(RemoteSettings settings,
                                        const char* model_env);

}  // namespace rematch
