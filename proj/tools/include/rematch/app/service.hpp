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
#include <string>

namespace rematch::app {

struct ServiceOptions {
  // One subdirectory per project under `data_dir`/projects.
  std::filesystem::path data_dir = "rematch-data";
  // Runs allowed at once on one project; further submissions get 409.
  std::size_t max_running_per_project = 1;
};

// HTTP API under /api/v1. Projects, guidance, and runs are plain files in the
// data directory; runs execute asynchronously and are polled.
//
//   POST   /api/v1/projects                      create from schemas (+ truth)
//   GET    /api/v1/projects                      list
//   GET    /api/v1/projects/{id}                 summary
//   POST   /api/v1/projects/{id}/runs            start a run
//   GET    /api/v1/projects/{id}/guidance        list guidance pairs
//   POST   /api/v1/projects/{id}/guidance        add a pair
//   DELETE /api/v1/projects/{id}/guidance        remove a pair
//   GET    /api/v1/projects/{id}/docs/{origin}   rendered document text
//   GET    /api/v1/runs/{job}                    state, and results when done
//   GET    /api/v1/runs/{job}/predictions.csv    predictions as CSV
//   GET    /api/v1/runs/{job}/eval?k=1,2         evaluation against the truth
//   POST   /api/v1/runs/{job}/resume             continue an interrupted run
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Blocks until stop() is called. False when the address cannot be bound.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port, serves on a background thread, and returns the
  // port (or -1).
  int start(const std::string& host = "127.0.0.1");
  void stop();

  // Blocks until no run is queued or running.
  void wait_idle();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rematch::app
