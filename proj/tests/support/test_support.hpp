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

#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "rematch/schema.hpp"

namespace rematch::testing {

// Root of tests/ in the source tree.
inline std::filesystem::path data_path(std::string_view rel) {
  return std::filesystem::path(REMATCH_TEST_DATA_DIR) / rel;
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() /
            ("rematch-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

struct TableSpec {
  std::string name;
  std::vector<std::string> attributes;
};

// Schema with empty descriptions and types; the first attribute is the PK.
inline Schema make_schema(std::string name, const std::vector<TableSpec>& tables) {
  Schema s;
  s.name = std::move(name);
  for (const auto& t : tables) {
    Table table;
    table.name = t.name;
    for (std::size_t i = 0; i < t.attributes.size(); ++i) {
      Attribute a;
      a.name = t.attributes[i];
      a.is_primary_key = (i == 0);
      table.attributes.push_back(a);
    }
    s.tables.push_back(std::move(table));
  }
  return s;
}

inline Schema fixture_schema(std::string_view rel) { return load_schema(data_path(rel)); }

}  // namespace rematch::testing
