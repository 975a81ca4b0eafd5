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

#include "rematch/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "rematch/error.hpp"
#include "rematch/table_format.hpp"
#include "rematch/text.hpp"

namespace rematch {

namespace {

using Key = std::pair<std::string, std::string>;

Key key_of(const AttributeRef& ref) { return {name_key(ref.table), name_key(ref.attribute)}; }

// Truth as attribute -> single target, in first-seen order.
struct TruthIndex {
  std::vector<std::pair<AttributeRef, MatchTarget>> entries;
  std::map<Key, std::size_t> index;
};

TruthIndex index_truth(const GroundTruth& truth) {
  TruthIndex out;
  for (const auto& p : truth.pairs) {
    auto [it, inserted] = out.index.emplace(key_of(p.source), out.entries.size());
    if (!inserted) {
      throw Error(ErrorCode::kAmbiguousTruth,
                  "source attribute has more than one ground-truth pair",
                  p.source.table + "." + p.source.attribute);
    }
    out.entries.emplace_back(p.source, p.target);
  }
  return out;
}

std::map<Key, const RankedRow*> index_rows(const PredictionMatrix& m) {
  std::map<Key, const RankedRow*> out;
  for (const auto& row : m.rows) out.emplace(key_of({row.src_table, row.src_attr}), &row);
  return out;
}

// 1-based rank of `want` within the first `width` targets, 0 if absent.
std::size_t hit_rank(const RankedRow* row, const MatchTarget& want, std::size_t width) {
  if (!row) return 0;
  const std::size_t n = std::min(width, row->targets.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (same_target(row->targets[i], want)) return i + 1;
  }
  return 0;
}

void check_k(const PredictionMatrix& predictions, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidRequest, "K must be at least 1");
  if (k > predictions.k) {
    throw Error(ErrorCode::kKTooLarge, "K=" + std::to_string(k) +
                                           " exceeds prediction width " +
                                           std::to_string(predictions.k));
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

double accuracy_at_k(const PredictionMatrix& predictions, const GroundTruth& truth,
                     std::size_t k) {
  check_k(predictions, k);
  const TruthIndex t = index_truth(truth);
  if (t.entries.empty()) throw Error(ErrorCode::kInvalidRequest, "empty ground truth");
  const auto rows = index_rows(predictions);
  std::size_t hits = 0;
  for (const auto& [src, want] : t.entries) {
    auto it = rows.find(key_of(src));
    if (hit_rank(it == rows.end() ? nullptr : it->second, want, k) != 0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(t.entries.size());
}

F1Score f1_argmax(const PredictionMatrix& predictions, const GroundTruth& truth) {
  check_k(predictions, 1);
  const TruthIndex t = index_truth(truth);
  if (t.entries.empty()) throw Error(ErrorCode::kInvalidRequest, "empty ground truth");
  const auto rows = index_rows(predictions);
  // Every attribute has exactly one rank-1 prediction; a missing row is an
  // incorrect one, as in accuracy_at_k.
  std::size_t tp = 0;
  const std::size_t predicted = t.entries.size();
  for (const auto& [src, want] : t.entries) {
    auto it = rows.find(key_of(src));
    if (hit_rank(it == rows.end() ? nullptr : it->second, want, 1) != 0) ++tp;
  }
  const std::size_t fp = predicted - tp;
  const std::size_t fn = t.entries.size() - tp;
  F1Score s;
  s.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
  s.recall = static_cast<double>(tp) / static_cast<double>(t.entries.size());
  const std::size_t denom = 2 * tp + fp + fn;
  s.f1 = denom ? static_cast<double>(2 * tp) / static_cast<double>(denom) : 0.0;
  return s;
}

EvalReport make_report(const PredictionMatrix& predictions, const GroundTruth& truth,
                       const std::vector<std::size_t>& k_values) {
  if (k_values.empty()) throw Error(ErrorCode::kInvalidRequest, "no K values requested");
  for (std::size_t k : k_values) check_k(predictions, k);

  EvalReport report;
  report.k_values = k_values;
  report.avg_candidate_tables = predictions.avg_candidate_tables();
  report.config = predictions.config;

  std::map<Key, bool> ambiguous;
  for (const auto& ref : one_to_many_sources(truth)) {
    ambiguous[key_of(ref)] = true;
    report.excluded.push_back({ref, "1:n ground truth (more than one pair)"});
  }
  GroundTruth evaluable;
  for (const auto& p : truth.pairs) {
    if (!ambiguous.count(key_of(p.source))) evaluable.pairs.push_back(p);
  }
  report.n_excluded = report.excluded.size();

  const TruthIndex t = index_truth(evaluable);
  report.n_evaluated = t.entries.size();
  for (std::size_t k : k_values) report.accuracy_at_k[k] = accuracy_at_k(predictions, evaluable, k);
  report.argmax = f1_argmax(predictions, evaluable);

  const auto rows = index_rows(predictions);
  for (const auto& [src, want] : t.entries) {
    auto it = rows.find(key_of(src));
    report.per_attribute_outcomes.push_back(
        {src, hit_rank(it == rows.end() ? nullptr : it->second, want, predictions.k)});
  }
  for (const auto& row : predictions.rows) {
    Key key = key_of({row.src_table, row.src_attr});
    if (!t.index.count(key) && !ambiguous.count(key)) ++report.n_unlabeled;
  }
  return report;
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json acc = nlohmann::json::object();
  for (const auto& [k, v] : report.accuracy_at_k) acc[std::to_string(k)] = v;
  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& o : report.per_attribute_outcomes) {
    outcomes.push_back({{"src_table", o.source.table},
                        {"src_attr", o.source.attribute},
                        {"hit_rank", o.hit_rank == 0 ? nlohmann::json(nullptr)
                                                     : nlohmann::json(o.hit_rank)}});
  }
  nlohmann::json excluded = nlohmann::json::array();
  for (const auto& e : report.excluded) {
    excluded.push_back(
        {{"src_table", e.source.table}, {"src_attr", e.source.attribute}, {"reason", e.reason}});
  }
  return {{"k_values", report.k_values},
          {"accuracy_at_k", acc},
          {"f1_argmax",
           {{"precision", report.argmax.precision},
            {"recall", report.argmax.recall},
            {"f1", report.argmax.f1}}},
          {"avg_candidate_tables", report.avg_candidate_tables},
          {"n_evaluated", report.n_evaluated},
          {"n_excluded", report.n_excluded},
          {"n_unlabeled", report.n_unlabeled},
          {"excluded", excluded},
          {"per_attribute_outcomes", outcomes},
          {"config", report.config}};
}

std::string report_to_text(const EvalReport& report, const std::string& row_label) {
  std::vector<std::string> header{"Retrieved Documents"};
  std::vector<std::string> row{row_label};
  for (std::size_t k : report.k_values) {
    header.push_back("Acc@" + std::to_string(k));
    row.push_back(fixed(report.accuracy_at_k.at(k), 3));
  }
  header.emplace_back("Avg #T");
  row.push_back(fixed(report.avg_candidate_tables, 2));
  return render_aligned_table(header, {row});
}

}  // namespace rematch
