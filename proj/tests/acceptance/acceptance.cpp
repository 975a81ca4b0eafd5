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

// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exits non-zero
// when any criterion fails.

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fuzz.hpp"
#include "oracles.hpp"
#include "rematch/app/cli.hpp"
#include "rematch/app/service.hpp"
#include "rematch/docgen.hpp"
#include "rematch/embedding.hpp"
#include "rematch/error.hpp"
#include "rematch/eval.hpp"
#include "rematch/grid_search.hpp"
#include "rematch/manifest.hpp"
#include "rematch/pipeline.hpp"
#include "rematch/prompt.hpp"
#include "rematch/response_parser.hpp"
#include "rematch/retrieval.hpp"
#include "rematch/schema.hpp"
#include "rematch/text.hpp"
#include "test_support.hpp"

namespace rematch {
namespace {

using nlohmann::json;
using testing::data_path;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome pass(std::string d) { return {Status::kPass, std::move(d)}; }
Outcome fail(std::string d) { return {Status::kFail, std::move(d)}; }

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

Outcome accuracy_oracle() {
  Clock clock;
  std::mt19937_64 rng(1001);
  std::size_t checks = 0;
  for (int i = 0; i < 200; ++i) {
    const auto inst = testing::random_eval_instance(rng, 30, 7);
    const PredictionMatrix m = testing::to_matrix(inst);
    for (std::size_t k = 1; k <= inst.k; ++k, ++checks) {
      const double got = accuracy_at_k(m, GroundTruth{inst.truth}, k);
      const double want = testing::brute_accuracy(inst.rows, inst.truth, k);
      if (got != want) {
        return fail("instance " + std::to_string(i) + " K=" + std::to_string(k) + ": " + fmt("%.17g", got) +
                    " vs brute force " + fmt("%.17g", want));
      }
    }
  }
  const double s = clock.seconds();
  if (s >= 5.0) return fail("took " + fmt("%.2f", s) + " s");
  return pass(std::to_string(checks) + " (instance, K) checks equal, " + fmt("%.3f", s) + " s");
}

Outcome accuracy_monotone() {
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 200; ++i) {
    const auto inst = testing::random_eval_instance(rng, 30, 7);
    const PredictionMatrix m = testing::to_matrix(inst);
    double prev = -1.0;
    for (std::size_t k = 1; k <= inst.k; ++k) {
      const double acc = accuracy_at_k(m, GroundTruth{inst.truth}, k);
      if (acc < prev) return fail("instance " + std::to_string(i) + " drops at K=" + std::to_string(k));
      prev = acc;
    }
  }
  return pass("200 instances non-decreasing in K");
}

Outcome f1_equals_acc1() {
  Clock clock;
  std::mt19937_64 rng(2002);
  std::size_t with_na = 0;
  for (int i = 0; i < 200; ++i) {
    const auto inst = testing::random_eval_instance(rng, 30, 7);
    for (const auto& p : inst.truth) {
      if (!p.target) {
        ++with_na;
        break;
      }
    }
    const PredictionMatrix m = testing::to_matrix(inst);
    const GroundTruth truth{inst.truth};
    const double f1 = f1_argmax(m, truth).f1;
    const double acc1 = accuracy_at_k(m, truth, 1);
    if (f1 != acc1) return fail("instance " + std::to_string(i) + ": F1 " + fmt("%.17g", f1) + " vs acc@1 " + fmt("%.17g", acc1));
  }
  const double s = clock.seconds();
  if (s >= 5.0) return fail("took " + fmt("%.2f", s) + " s");
  return pass("200 instances (" + std::to_string(with_na) + " with NA truth), " + fmt("%.3f", s) + " s");
}

EmbeddingVector random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  EmbeddingVector v;
  do {
    v.values.assign(dim, 0.0);
    for (auto& x : v.values) x = g(rng);
  } while (v.is_zero());
  return v;
}

Outcome retrieval_oracle() {
  Clock clock;
  std::mt19937_64 rng(3003);
  std::size_t ties = 0;
  for (int c = 0; c < 500; ++c) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<NamedVector> corpus;
    for (std::size_t i = 0; i < n; ++i) {
      // Duplicated vectors force exact score ties.
      if (i > 0 && rng() % 5 == 0) {
        corpus.push_back({"t" + std::to_string(i), corpus[rng() % i].vector});
        ++ties;
      } else {
        corpus.push_back({"t" + std::to_string(i), random_vector(rng, 64)});
      }
    }
    const EmbeddingVector q = random_vector(rng, 64);
    const std::size_t j = 1 + rng() % 60;
    std::vector<std::string> got;
    for (const auto& hit : retrieve_top_j(q, corpus, j)) got.push_back(hit.table);
    if (got != testing::brute_top_j(q.values, corpus, j)) {
      return fail("corpus " + std::to_string(c) + " differs from the exhaustive sort");
    }
  }
  const double s = clock.seconds();
  if (s >= 10.0) return fail("took " + fmt("%.2f", s) + " s");
  return pass("500 corpora, " + std::to_string(ties) + " planted ties, " + fmt("%.3f", s) + " s");
}

Outcome candidate_set_bound() {
  std::mt19937_64 rng(4004);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n_attrs = 1 + rng() % 8;
    const std::size_t n_targets = 1 + rng() % 15;
    std::vector<std::string> attrs;
    for (std::size_t a = 0; a < n_attrs; ++a) attrs.push_back("a" + std::to_string(a));
    std::vector<testing::TableSpec> tables{{"SRC", attrs}};
    const Schema source = testing::make_schema("S", tables);
    EmbeddingIndex index;
    for (const auto& a : source.tables[0].attributes) {
      index.emplace(DocOrigin{"S", "SRC", a.name}.key(), random_vector(rng, 16));
    }
    std::vector<NamedVector> targets;
    for (std::size_t t = 0; t < n_targets; ++t) {
      targets.push_back({"T" + std::to_string(t), random_vector(rng, 16)});
    }
    std::set<std::string> previous;
    for (std::size_t j = 1; j <= n_targets + 1; ++j) {
      const CandidateSet c = build_candidate_set(source, source.tables[0], index, targets, j);
      const std::set<std::string> now(c.tables.begin(), c.tables.end());
      if (now.size() != c.tables.size()) return fail("schema " + std::to_string(i) + ": duplicate candidates");
      if (c.tables.size() > std::min(n_targets, j * n_attrs)) {
        return fail("schema " + std::to_string(i) + " J=" + std::to_string(j) + ": |T_c| = " +
                    std::to_string(c.tables.size()));
      }
      std::set<std::string> expected;
      for (const auto& a : source.tables[0].attributes) {
        const auto& v = index.at(DocOrigin{"S", "SRC", a.name}.key()).values;
        for (const auto& name : testing::brute_top_j(v, targets, j)) expected.insert(name);
      }
      if (now != expected) return fail("schema " + std::to_string(i) + ": T_c differs from the union of top-J");
      if (!std::includes(now.begin(), now.end(), previous.begin(), previous.end())) {
        return fail("schema " + std::to_string(i) + ": T_c shrinks at J=" + std::to_string(j));
      }
      previous = now;
    }
  }
  return pass("200 schemas, every J up to |T2|+1");
}

Outcome prompt_fidelity() {
  const Schema mimic = testing::fixture_schema("fixtures/admissions/mimic.json");
  const Schema omop = testing::fixture_schema("fixtures/admissions/omop.json");
  const Corpora corpora = build_corpora(mimic, omop, DocMode::kFull);
  const CandidateSet all = all_tables_candidate_set(mimic.tables[0], omop);
  PromptInputs in;
  in.source = &mimic;
  in.source_table = &mimic.tables[0];
  in.source_docs = &corpora.source_attributes;
  in.candidates = &all;
  in.target = &omop;
  in.target_docs = &corpora.target_tables;
  in.k = 2;
  const MatchPrompt p = build_match_prompt(in);
  if (p.system_text != read_file(data_path("golden/admissions_k2.system.txt"))) {
    return fail("system message differs from the golden file");
  }
  if (p.user_text != read_file(data_path("golden/admissions_k2.user.txt"))) {
    return fail("user message differs from the golden file");
  }
  for (int i = 0; i < 10; ++i) {
    const MatchPrompt again = build_match_prompt(in);
    if (again.system_text != p.system_text || again.user_text != p.user_text) {
      return fail("run " + std::to_string(i) + " differs");
    }
  }
  return pass("ADMISSIONS K=2 byte-identical to golden, 10 identical runs");
}

Outcome parser_robustness() {
  const Schema target = testing::make_schema("T", {{"PERSON", {"person_id"}}});
  const CandidateSet cands{"ADMISSIONS", {"PERSON"}, {}};
  const std::vector<AttributeRef> expected{{"ADMISSIONS", "SUBJECT_ID"}};

  const ParsedResponse sample =
      parse_topk_response(read_file(data_path("golden/expected_output_sample.txt")), expected, 2, cands, target);
  if (sample.rows.size() != 2 || sample.rows[0].targets.size() != 2) return fail("sample rows not recovered");

  const ParsedResponse dup = parse_topk_response(
      "{'1': {'SRC_ENT': 'ADMISSIONS', 'SRC_ATT': 'SUBJECT_ID', 'TGT_ENT1': 'NA', 'TGT_ATT1': 'NA', "
      "'TGT_ENT2': 'NA', 'TGT_ATT2': 'NA'}}",
      expected, 2, cands, target);
  bool flagged = false;
  for (const auto& d : dup.diagnostics) flagged = flagged || d.kind == DiagnosticKind::kDuplicateNA;
  if (!flagged) return fail("double-NA row not flagged");

  std::mt19937_64 rng(5005);
  std::size_t parsed = 0, unparseable = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string input = testing::fuzz_response(rng, testing::kFuzzSeedResponse);
    try {
      parse_topk_response(input, expected, 2, cands, target);
      ++parsed;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnparseable) return fail("fuzz input raised " + std::string(e.what()));
      ++unparseable;
    } catch (const std::exception& e) {
      return fail(std::string("fuzz input raised ") + e.what());
    }
  }
  return pass("sample accepted, DuplicateNA flagged, 10000 fuzz inputs (" + std::to_string(parsed) +
              " parsed, " + std::to_string(unparseable) + " Unparseable)");
}

PipelineConfig local_config(std::optional<std::size_t> j, std::size_t k) {
  PipelineConfig c;
  c.retrieval = j.has_value();
  c.j = j.value_or(1);
  c.k = k;
  return c;
}

Outcome planted_end_to_end() {
  Clock clock;
  const Schema s = testing::fixture_schema("fixtures/planted/source.json");
  const Schema t = testing::fixture_schema("fixtures/planted/target.json");
  const GroundTruth truth = load_ground_truth(data_path("fixtures/planted/truth.csv"));
  if (s.tables.size() != 4 || t.tables.size() != 6) return fail("fixture is not 4 x 6 tables");
  const double acc = accuracy_at_k(run_rematch(s, t, local_config(1, 1)), truth, 1);
  const double avg_t = run_rematch(s, t, local_config(std::nullopt, 1)).avg_candidate_tables();
  const double secs = clock.seconds();
  const std::string detail = "acc@1 " + fmt("%.3f", acc) + " at J=1 K=1, Avg #T " + fmt("%.2f", avg_t) +
                             " at J=inf, " + fmt("%.3f", secs) + " s";
  if (acc != 1.0 || avg_t != 6.0 || secs >= 10.0) return fail(detail);
  return pass(detail);
}

Outcome guidance_effect() {
  const Schema s = testing::fixture_schema("fixtures/adversarial/source.json");
  const Schema t = testing::fixture_schema("fixtures/adversarial/target.json");
  const GroundTruth truth = load_ground_truth(data_path("fixtures/adversarial/truth.csv"));
  const GroundTruth guidance = load_ground_truth(data_path("fixtures/adversarial/guidance.csv"));
  GroundTruth ward;
  for (const auto& p : truth.pairs) {
    if (p.source.table == "WARD_STAY") ward.pairs.push_back(p);
  }
  PipelineConfig c = local_config(1, 1);
  const PredictionMatrix before = run_rematch(s, t, c);
  const double acc_before = accuracy_at_k(before, ward, 1);
  c.guidance = guidance.pairs;
  const PredictionMatrix after = run_rematch(s, t, c);
  const double acc_after = accuracy_at_k(after, ward, 1);
  const bool stable = run_rematch(s, t, c).rows == after.rows;
  const std::string detail =
      "WARD_STAY acc@1 " + fmt("%.3f", acc_before) + " -> " + fmt("%.3f", acc_after) + (stable ? "" : ", not deterministic");
  if (acc_before != 0.0 || acc_after != 1.0 || !stable) return fail(detail);
  return pass(detail);
}

Outcome mimic_statistics() {
  const char* dir = std::getenv("REMATCH_MIMIC_DIR");
  if (!dir) return {Status::kSkip, "REMATCH_MIMIC_DIR not set"};
  const std::filesystem::path root(dir);
  for (const char* f : {"mimic.json", "omop.json", "mimic_to_omop.csv"}) {
    if (!std::filesystem::exists(root / f)) return {Status::kSkip, (root / f).string() + " absent"};
  }
  const Schema mimic = load_schema(root / "mimic.json");
  const Schema omop = load_schema(root / "omop.json");
  const GroundTruth truth = load_ground_truth(root / "mimic_to_omop.csv");
  const DatasetStats src = dataset_stats(mimic, truth);
  const DatasetStats tgt = target_stats(omop, truth);
  std::ostringstream d;
  d << "source (" << src.n_columns << ", " << src.n_tables << ", " << src.n_mapped_columns << ", "
    << src.n_null_mappings << "), target (" << tgt.n_columns << ", " << tgt.n_tables << ")";
  if (src != DatasetStats{268, 25, 156, 112} || tgt.n_columns != 425 || tgt.n_tables != 38) return fail(d.str());
  return pass(d.str());
}

Outcome grid_layout() {
  Clock clock;
  const Schema s = testing::fixture_schema("fixtures/planted/source.json");
  const Schema t = testing::fixture_schema("fixtures/planted/target.json");
  const GroundTruth truth = load_ground_truth(data_path("fixtures/planted/truth.csv"));
  const GridReport g = grid_search(s, t, truth, {1, 2, 3, 5, 7}, {1, 2, 3, 5, 7}, local_config(1, 1));
  const double secs = clock.seconds();
  std::istringstream text(g.to_text());
  std::vector<std::string> lines;
  for (std::string line; std::getline(text, line);) lines.push_back(line);
  auto cells = [](const std::string& line) {
    std::vector<std::string> out;
    for (const auto& part : split(line, '|')) out.emplace_back(trim(part));
    return out;
  };
  const std::vector<std::string> header{"Retrieved Documents", "Acc@1", "Acc@2", "Acc@3", "Acc@5", "Acc@7", "Avg #T"};
  if (lines.size() != 7 || cells(lines[0]) != header) return fail("header or row count differs");
  const char* labels[] = {"J=1", "J=2", "J=3", "J=5", "J=7"};
  for (int r = 0; r < 5; ++r) {
    const auto row = cells(lines[2 + r]);
    if (row.size() != 7 || row[0] != labels[r]) return fail("row " + std::to_string(r) + " malformed");
  }
  for (const auto& cell : g.cells) {
    if (!cell.ok) return fail("cell " + j_label(cell.j) + " K=" + std::to_string(cell.k) + ": " + cell.error);
  }
  if (secs >= 60.0) return fail("took " + fmt("%.2f", secs) + " s");
  return pass("5x5 grid with Avg #T column, " + fmt("%.3f", secs) + " s");
}

Outcome cli_http_parity() {
  testing::TempDir dir;
  const std::string src = data_path("fixtures/planted/source.json").string();
  const std::string tgt = data_path("fixtures/planted/target.json").string();
  std::ostringstream out, err;
  const int code = app::run_cli({"match", "--source", src, "--target", tgt, "--j", "2", "--k", "3", "--out",
                                 (dir / "cli").string()},
                                out, err);
  if (code != app::kExitOk) return fail("CLI exited " + std::to_string(code) + ": " + err.str());

  app::Service service(app::ServiceOptions{dir / "store", 1});
  const int port = service.start();
  if (port < 0) return fail("service could not bind");
  httplib::Client client("127.0.0.1", port);
  const json project = {{"source", json::parse(read_file(src))}, {"target", json::parse(read_file(tgt))}};
  auto created = client.Post("/api/v1/projects", project.dump(), "application/json");
  if (!created || created->status != 201) return fail("project creation failed");
  const std::string id = json::parse(created->body)["id"];
  auto run = client.Post("/api/v1/projects/" + id + "/runs", json{{"j", 2}, {"k", 3}}.dump(), "application/json");
  if (!run || run->status != 202) return fail("run submission failed");
  const std::string job = json::parse(run->body)["job"];
  service.wait_idle();
  auto state = client.Get("/api/v1/runs/" + job);
  auto csv = client.Get("/api/v1/runs/" + job + "/predictions.csv");
  service.stop();
  if (!state || state->status != 200 || !csv || csv->status != 200) return fail("run did not complete");

  const PredictionMatrix from_http = manifest_from_json(json::parse(state->body)["result"]);
  const PredictionMatrix from_cli = load_manifest(dir / "cli");
  if (from_http.k != from_cli.k || from_http.rows != from_cli.rows) return fail("prediction rows differ");
  if (csv->body != read_file(dir / "cli" / "predictions.csv")) return fail("predictions.csv differs");
  return pass(std::to_string(from_cli.rows.size()) + " identical rows, byte-identical predictions.csv");
}

struct Criterion {
  const char* name;
  Outcome (*check)();
};

}  // namespace
}  // namespace rematch

int main() {
  using namespace rematch;
  const Criterion criteria[] = {
      {"accuracy-at-k-oracle", accuracy_oracle},
      {"accuracy-monotone-in-k", accuracy_monotone},
      {"f1-equals-accuracy-at-1", f1_equals_acc1},
      {"retrieval-oracle", retrieval_oracle},
      {"candidate-set-bound", candidate_set_bound},
      {"prompt-fidelity", prompt_fidelity},
      {"parser-robustness", parser_robustness},
      {"planted-end-to-end", planted_end_to_end},
      {"guidance-effect", guidance_effect},
      {"mimic-dataset-statistics", mimic_statistics},
      {"grid-search-layout", grid_layout},
      {"cli-http-parity", cli_http_parity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kSkip ? "SKIP" : "FAIL";
    std::printf("%s %s: %s\n", tag, c.name, o.detail.c_str());
    failures += o.status == Status::kFail;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
