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

#include <random>
#include <string>

namespace rematch::testing {

inline const std::string kFuzzSeedResponse =
    "{'1': {'SRC_ENT': 'ADMISSIONS', 'SRC_ATT': 'SUBJECT_ID', 'TGT_ENT1': 'PERSON', 'TGT_ATT1': 'person_id', "
    "'TGT_ENT2': 'NA', 'TGT_ATT2': 'NA'}, '2': {'SRC_ENT': 'ADMISSIONS', 'SRC_ATT': 'HADM_ID', "
    "'TGT_ENT1': 'VISIT', 'TGT_ATT1': 'visit_id'}}";

// Inputs mixing valid fragments, random bytes, and mutations of a valid
// response. Parsing must either succeed or raise Unparseable.
inline std::string fuzz_response(std::mt19937_64& rng, const std::string& seed) {
  std::uniform_int_distribution<int> pick(0, 5);
  std::string s;
  switch (pick(rng)) {
    case 0: {
      const std::size_t n = rng() % 200;
      for (std::size_t i = 0; i < n; ++i) s += static_cast<char>(rng() % 256);
      break;
    }
    case 1:
      s = seed.substr(0, rng() % (seed.size() + 1));
      break;
    case 2: {
      s = seed;
      for (int i = 0, n = 1 + static_cast<int>(rng() % 8); i < n; ++i) {
        s[rng() % s.size()] = "{}[]'\":,\\ \nNA0"[rng() % 15];
      }
      break;
    }
    case 3: {
      const std::size_t depth = rng() % 300;
      s = std::string(depth, "{["[rng() % 2]) + seed + std::string(rng() % (depth + 1), '}');
      break;
    }
    case 4: {
      const char* atoms[] = {"{", "}", "[", "]", "'", "\"", ":", ",", "None", "True", "'SRC_ENT'",
                             "'TGT_ENT1'", "'TGT_ATT99999'", "'NA'", "1e999", "-", "\\u12", "'x'"};
      for (int i = 0, n = static_cast<int>(rng() % 60); i < n; ++i) s += atoms[rng() % 18];
      break;
    }
    default: {
      s = seed;
      s.insert(rng() % s.size(), std::string(1, static_cast<char>(rng() % 256)));
      s.erase(rng() % s.size(), rng() % 5);
    }
  }
  return s;
}

}  // namespace rematch::testing
