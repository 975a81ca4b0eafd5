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

#include "rematch/response_parser.hpp"

#include <cctype>
#include <map>

#include "rematch/error.hpp"
#include "rematch/text.hpp"

namespace rematch {

using ojson = nlohmann::ordered_json;

namespace {

constexpr int kMaxDepth = 64;

class RelaxedParser {
 public:
  explicit RelaxedParser(std::string_view s) : s_(s) {}

  bool parse(ojson* out) { return value(out, 0); }
  std::size_t pos() const { return pos_; }

 private:
  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool value(ojson* out, int depth) {
    if (depth > kMaxDepth) return false;
    skip_ws();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    if (c == '{') return object(out, depth);
    if (c == '[') return array(out, depth);
    if (c == '\'' || c == '"') {
      std::string str;
      if (!string(&str)) return false;
      *out = std::move(str);
      return true;
    }
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      return number(out);
    }
    std::string word = identifier();
    if (word == "null" || word == "None") {
      *out = nullptr;
    } else if (word == "true" || word == "True") {
      *out = true;
    } else if (word == "false" || word == "False") {
      *out = false;
    } else {
      return false;
    }
    return true;
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size()) {
      unsigned char c = static_cast<unsigned char>(s_[pos_]);
      if (std::isalnum(c) || c == '_' || c == '-' || c == '.') {
        ++pos_;
      } else {
        break;
      }
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  bool number(ojson* out) {
    std::size_t start = pos_;
    if (s_[pos_] == '-' || s_[pos_] == '+') ++pos_;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' ||
          c == 'E' || c == '-' || c == '+') {
        ++pos_;
      } else {
        break;
      }
    }
    std::string text(s_.substr(start, pos_ - start));
    if (text == "-" || text == "+") return false;
    bool integral = text.find_first_of(".eE") == std::string::npos;
    try {
      if (integral) {
        *out = std::stoll(text);
      } else {
        *out = std::stod(text);
      }
    } catch (...) {
      // Out-of-range or malformed numerals survive as text.
      *out = text;
    }
    return true;
  }

  static void append_utf8(std::string* out, unsigned cp) {
    if (cp < 0x80) {
      *out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      *out += static_cast<char>(0xC0 | (cp >> 6));
      *out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      *out += static_cast<char>(0xE0 | (cp >> 12));
      *out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      *out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  bool string(std::string* out) {
    const char quote = s_[pos_++];
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == quote) return true;
      if (c != '\\') {
        *out += c;
        continue;
      }
      if (pos_ >= s_.size()) return false;
      char e = s_[pos_++];
      switch (e) {
        case 'n': *out += '\n'; break;
        case 't': *out += '\t'; break;
        case 'r': *out += '\r'; break;
        case 'b': *out += '\b'; break;
        case 'f': *out += '\f'; break;
        case 'u': {
          if (pos_ + 4 > s_.size()) return false;
          unsigned cp = 0;
          for (int i = 0; i < 4; ++i) {
            char h = s_[pos_++];
            cp <<= 4;
            if (h >= '0' && h <= '9') cp |= static_cast<unsigned>(h - '0');
            else if (h >= 'a' && h <= 'f') cp |= static_cast<unsigned>(h - 'a' + 10);
            else if (h >= 'A' && h <= 'F') cp |= static_cast<unsigned>(h - 'A' + 10);
            else return false;
          }
          append_utf8(out, cp);
          break;
        }
        default: *out += e;
      }
    }
    return false;
  }

  bool key(std::string* out) {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    if (s_[pos_] == '\'' || s_[pos_] == '"') return string(out);
    *out = identifier();
    return !out->empty();
  }

  bool object(ojson* out, int depth) {
    ++pos_;  // '{'
    *out = ojson::object();
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) return false;
      if (s_[pos_] == '}') {
        ++pos_;
        return true;
      }
      std::string k;
      if (!key(&k)) return false;
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != ':') return false;
      ++pos_;
      ojson v;
      if (!value(&v, depth + 1)) return false;
      // Repeated keys keep the first occurrence.
      if (!out->contains(k)) (*out)[k] = std::move(v);
      skip_ws();
      if (pos_ >= s_.size()) return false;
      if (s_[pos_] == ',') {
        ++pos_;
      } else if (s_[pos_] != '}') {
        return false;
      }
    }
  }

  bool array(ojson* out, int depth) {
    ++pos_;  // '['
    *out = ojson::array();
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) return false;
      if (s_[pos_] == ']') {
        ++pos_;
        return true;
      }
      ojson v;
      if (!value(&v, depth + 1)) return false;
      out->push_back(std::move(v));
      skip_ws();
      if (pos_ >= s_.size()) return false;
      if (s_[pos_] == ',') {
        ++pos_;
      } else if (s_[pos_] != ']') {
        return false;
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

const ojson* find_key(const ojson& obj, std::string_view key) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (same_name(it.key(), key)) return &it.value();
  }
  return nullptr;
}

bool is_row(const ojson& v) {
  return v.is_object() && find_key(v, "SRC_ENT") != nullptr &&
         find_key(v, "SRC_ATT") != nullptr;
}

bool is_mapping(const ojson& v) {
  if (is_row(v)) return true;
  if (!v.is_object() && !v.is_array()) return false;
  for (const auto& item : v) {
    if (is_row(item)) return true;
  }
  return false;
}

// Depth-first search for the outermost value that holds rows.
const ojson* locate_mapping(const ojson& v, int depth = 0) {
  if (depth > kMaxDepth) return nullptr;
  if (is_mapping(v)) return &v;
  if (v.is_object() || v.is_array()) {
    for (const auto& item : v) {
      if (const ojson* found = locate_mapping(item, depth + 1)) return found;
    }
  }
  return nullptr;
}

std::string scalar_text(const ojson& v) {
  if (v.is_string()) return std::string(trim(v.get<std::string>()));
  if (v.is_null()) return "NA";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

bool is_na(const std::string& s) { return s.empty() || same_name(s, "NA"); }

}  // namespace

std::optional<ojson> parse_relaxed_literal(std::string_view text, std::size_t* consumed) {
  RelaxedParser parser(text);
  ojson out;
  if (!parser.parse(&out)) return std::nullopt;
  if (consumed) *consumed = parser.pos();
  return out;
}

ParsedResponse parse_topk_response(std::string_view raw,
                                   std::span<const AttributeRef> expected,
                                   std::size_t k, const CandidateSet& candidates,
                                   const Schema& target) {
  ojson mapping;
  bool found = false;
  for (std::size_t i = raw.find('{'); i != std::string_view::npos;
       i = raw.find('{', i + 1)) {
    std::size_t used = 0;
    auto parsed = parse_relaxed_literal(raw.substr(i), &used);
    if (!parsed) continue;
    if (const ojson* m = locate_mapping(*parsed)) {
      mapping = *m;
      found = true;
      break;
    }
    // Nothing inside this object; resume after it.
    i += used - 1;
  }
  if (!found) {
    throw Error(ErrorCode::kUnparseable, "no mapping object in ranker response");
  }

  std::vector<const ojson*> entries;
  if (is_row(mapping)) {
    entries.push_back(&mapping);
  } else {
    for (const auto& item : mapping) {
      if (is_row(item)) entries.push_back(&item);
    }
  }

  ParsedResponse out;
  std::vector<bool> matched(expected.size(), false);
  for (const ojson* entry : entries) {
    RankedRow row;
    row.src_table = scalar_text(*find_key(*entry, "SRC_ENT"));
    row.src_attr = scalar_text(*find_key(*entry, "SRC_ATT"));

    // TGT_ENTi / TGT_ATTi in index order; unnumbered keys count as index 1.
    std::map<int, std::pair<const ojson*, const ojson*>> slots;
    for (auto it = entry->begin(); it != entry->end(); ++it) {
      const std::string key = to_lower(trim(it.key()));
      bool is_ent = key.rfind("tgt_ent", 0) == 0;
      bool is_att = key.rfind("tgt_att", 0) == 0;
      if (!is_ent && !is_att) continue;
      std::string suffix = key.substr(7);
      int index = 1;
      if (!suffix.empty()) {
        if (suffix.size() > 4 ||
            suffix.find_first_not_of("0123456789") != std::string::npos) {
          continue;
        }
        index = std::stoi(suffix);
      }
      auto& slot = slots[index];
      (is_ent ? slot.first : slot.second) = &it.value();
    }
    std::size_t na_count = 0;
    for (const auto& [index, slot] : slots) {
      if (row.targets.size() == k) break;
      std::string t = slot.first ? scalar_text(*slot.first) : "NA";
      std::string a = slot.second ? scalar_text(*slot.second) : "NA";
      if (is_na(t) != is_na(a)) {
        out.diagnostics.push_back({DiagnosticKind::kInconsistentNA, row.src_table,
                                   row.src_attr,
                                   "slot " + std::to_string(index) + ": (" + t + ", " + a + ")"});
      }
      if (is_na(t) || is_na(a)) {
        row.targets.push_back(std::nullopt);
        ++na_count;
        continue;
      }
      AttributeRef ref{t, a};
      const Table* tt = target.find_table(t);
      if (!candidates.contains(t) || tt == nullptr || tt->find_attribute(a) == nullptr) {
        out.diagnostics.push_back({DiagnosticKind::kHallucinatedTarget, row.src_table,
                                   row.src_attr, t + "." + a});
      }
      row.targets.push_back(std::move(ref));
    }
    if (na_count > 1) {
      out.diagnostics.push_back({DiagnosticKind::kDuplicateNA, row.src_table, row.src_attr,
                                 std::to_string(na_count) + " NA targets"});
    }
    if (row.targets.size() < k) {
      out.diagnostics.push_back({DiagnosticKind::kShortRow, row.src_table, row.src_attr,
                                 std::to_string(row.targets.size()) + " of " +
                                     std::to_string(k) + " targets"});
    }
    bool is_expected = false;
    for (std::size_t e = 0; e < expected.size(); ++e) {
      if (!matched[e] && same_ref(expected[e], {row.src_table, row.src_attr})) {
        matched[e] = true;
        is_expected = true;
        break;
      }
    }
    if (!is_expected) {
      out.diagnostics.push_back({DiagnosticKind::kExtraRow, row.src_table, row.src_attr,
                                 "not requested or repeated"});
    }
    out.rows.push_back(std::move(row));
  }
  for (std::size_t e = 0; e < expected.size(); ++e) {
    if (!matched[e]) {
      out.diagnostics.push_back({DiagnosticKind::kMissingRow, expected[e].table,
                                 expected[e].attribute, "absent from response"});
    }
  }
  return out;
}

}  // namespace rematch
