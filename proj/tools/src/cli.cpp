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

#include "rematch/app/cli.hpp"

#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "json_config.hpp"
#include "rematch/app/service.hpp"
#include "rematch/docgen.hpp"
#include "rematch/error.hpp"
#include "rematch/eval.hpp"
#include "rematch/grid_search.hpp"
#include "rematch/manifest.hpp"
#include "rematch/pipeline.hpp"
#include "rematch/schema.hpp"
#include "rematch/table_format.hpp"
#include "rematch/text.hpp"

namespace rematch::app {

namespace {

struct BackendFlags {
  std::string embedder = "hash";
  std::size_t dim = 1024;
  std::string ranker = "oracle";
  std::string mode = "full";
  std::size_t context_budget = 100000;
  std::size_t parallel = 4;
  std::string cache_dir;
  std::string transcript;
  std::string tag;
};

void add_backend_flags(CLI::App* cmd, BackendFlags& f) {
  cmd->add_option("--embedder", f.embedder, "Embedding backend")
      ->check(CLI::IsMember({"hash", "remote"}))
      ->capture_default_str();
  cmd->add_option("--dim", f.dim, "Dimension of the hash embedder")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--ranker", f.ranker, "Ranking backend")
      ->check(CLI::IsMember({"oracle", "remote"}))
      ->capture_default_str();
  cmd->add_option("--mode", f.mode, "Document mode")
      ->check(CLI::IsMember({"full", "names-only"}))
      ->capture_default_str();
  cmd->add_option("--context-budget", f.context_budget, "Prompt size limit in characters")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--parallel", f.parallel, "Source tables processed concurrently")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--cache-dir", f.cache_dir, "Embedding cache directory");
  cmd->add_option("--transcript", f.transcript, "JSONL log of ranker calls");
  cmd->add_option("--tag", f.tag, "Free-form run label");
}

PipelineConfig base_config(const BackendFlags& f) {
  PipelineConfig c;
  c.embedder.kind = f.embedder == "remote" ? EmbedderKind::kRemote : EmbedderKind::kLocalHashTrigram;
  c.embedder.dim = f.dim;
  c.ranker.kind = f.ranker == "remote" ? RankerKind::kRemoteLlm : RankerKind::kLocalSimilarityOracle;
  c.ranker.context_budget_chars = f.context_budget;
  c.ranker.max_parallel_tables = f.parallel;
  c.doc_mode = parse_doc_mode(f.mode);
  c.cache_dir = f.cache_dir;
  c.transcript_path = f.transcript;
  c.tag = f.tag;
  return c;
}

void enable_config(CLI::App* cmd) {
  cmd->config_formatter(std::make_shared<detail::JsonConfig>());
  cmd->set_config("--config", "", "JSON file supplying any flag; command-line flags win");
}

std::vector<JValue> parse_j_list(const std::vector<std::string>& items) {
  std::vector<JValue> out;
  for (const auto& raw : items) {
    const std::string s = to_lower(trim(raw));
    if (s == "inf" || s == "infinity") {
      out.emplace_back(std::nullopt);
      continue;
    }
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || v <= 0) {
      throw CLI::ValidationError("--j", "values must be positive integers or 'inf': " + raw);
    }
    out.emplace_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::string run_label(const PredictionMatrix& m) {
  const auto& c = m.config;
  if (c.is_object() && c.contains("j")) {
    return c["j"].is_null() ? std::string("J=inf") : "J=" + c["j"].dump();
  }
  return "run";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Retrieval-enhanced schema matching", "rematch"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rematch 0.3.0");

  // match
  auto* match = app.add_subcommand("match", "Rank target attributes for every source attribute");
  std::string source, target, guidance_file, out_dir, checkpoint_dir;
  std::size_t j = 1, k = 1;
  bool no_retrieval = false;
  BackendFlags match_flags;
  match->add_option("--source", source, "Source schema JSON")->required()->check(CLI::ExistingFile);
  match->add_option("--target", target, "Target schema JSON")->required()->check(CLI::ExistingFile);
  auto* j_opt = match->add_option("--j", j, "Target tables retrieved per source attribute")
                    ->check(CLI::PositiveNumber)
                    ->capture_default_str();
  match->add_flag("--no-retrieval", no_retrieval, "Use every target table (J = infinity)")
      ->excludes(j_opt);
  match->add_option("--k", k, "Ranked targets per source attribute")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  match->add_option("--guidance", guidance_file, "Known mappings CSV")->check(CLI::ExistingFile);
  match->add_option("--checkpoint-dir", checkpoint_dir, "Persist per-table results for resuming");
  match->add_option("--out", out_dir, "Output directory")->required();
  add_backend_flags(match, match_flags);
  enable_config(match);

  // eval
  auto* eval = app.add_subcommand("eval", "Score a run against ground truth");
  std::string results, truth_file, eval_out;
  std::vector<std::size_t> eval_k{1};
  eval->add_option("--results", results, "Run directory or manifest.json")->required()->check(CLI::ExistingPath);
  eval->add_option("--truth", truth_file, "Ground-truth CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--k", eval_k, "Comma-separated K values")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  eval->add_option("--out", eval_out, "Directory for eval.json and eval.txt");
  enable_config(eval);

  // grid
  auto* grid = app.add_subcommand("grid", "Accuracy over a grid of J and K values");
  std::string grid_source, grid_target, grid_truth, grid_out;
  std::vector<std::string> grid_j{"1", "2", "3", "5", "7"};
  std::vector<std::size_t> grid_k{1, 2, 3, 5, 7};
  BackendFlags grid_flags;
  grid->add_option("--source", grid_source, "Source schema JSON")->required()->check(CLI::ExistingFile);
  grid->add_option("--target", grid_target, "Target schema JSON")->required()->check(CLI::ExistingFile);
  grid->add_option("--truth", grid_truth, "Ground-truth CSV")->required()->check(CLI::ExistingFile);
  grid->add_option("--j", grid_j, "Comma-separated J values ('inf' disables retrieval)")->delimiter(',');
  grid->add_option("--k", grid_k, "Comma-separated K values")->delimiter(',')->check(CLI::PositiveNumber);
  grid->add_option("--out", grid_out, "Directory for grid.json and grid.txt");
  add_backend_flags(grid, grid_flags);
  enable_config(grid);

  // docgen
  auto* docgen = app.add_subcommand("docgen", "Write the document corpora to a directory");
  std::string doc_source, doc_target, doc_out, doc_mode = "full";
  docgen->add_option("--source", doc_source, "Source schema JSON")->required()->check(CLI::ExistingFile);
  docgen->add_option("--target", doc_target, "Target schema JSON")->check(CLI::ExistingFile);
  docgen->add_option("--mode", doc_mode, "Document mode")
      ->check(CLI::IsMember({"full", "names-only"}))
      ->capture_default_str();
  docgen->add_option("--out", doc_out, "Output directory")->required();
  enable_config(docgen);

  // stats
  auto* stats = app.add_subcommand("stats", "Dataset statistics for a schema pair and its truth");
  std::string stats_source, stats_target, stats_truth;
  stats->add_option("--source", stats_source, "Source schema JSON")->required()->check(CLI::ExistingFile);
  stats->add_option("--target", stats_target, "Target schema JSON")->required()->check(CLI::ExistingFile);
  stats->add_option("--truth", stats_truth, "Ground-truth CSV")->required()->check(CLI::ExistingFile);
  enable_config(stats);

  // serve
  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  ServiceOptions service_opts;
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "rematch-data";
  serve->add_option("--bind", bind, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port")->check(CLI::Range(0, 65535))->capture_default_str();
  serve->add_option("--data", data_dir, "Project store directory")->capture_default_str();
  serve->add_option("--max-running", service_opts.max_running_per_project,
                    "Concurrent runs allowed per project")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  enable_config(serve);

  try {
    const std::vector<std::string> expanded = detail::expand_config_args(args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*match) {
      std::vector<std::string> warnings;
      const Schema s = load_schema(source, &warnings);
      const Schema t = load_schema(target, &warnings);
      for (const auto& w : warnings) err << "warning: " << w << "\n";
      PipelineConfig config = base_config(match_flags);
      config.retrieval = !no_retrieval;
      config.j = no_retrieval ? 0 : j;
      config.k = k;
      config.checkpoint_dir = checkpoint_dir;
      if (!guidance_file.empty()) config.guidance = load_ground_truth(guidance_file).pairs;
      const PredictionMatrix m = run_rematch(s, t, config);
      write_run_outputs(m, out_dir);
      out << "wrote " << m.rows.size() << " rows for " << m.tables.size()
          << " source tables to " << out_dir << "\n";
      const auto diags = m.diagnostics();
      if (!diags.empty()) out << diags.size() << " diagnostics recorded in manifest.json\n";
      return kExitOk;
    }
    if (*eval) {
      const PredictionMatrix m = load_manifest(results);
      const GroundTruth truth = load_ground_truth(truth_file);
      const EvalReport report = make_report(m, truth, eval_k);
      const std::string text = report_to_text(report, run_label(m));
      out << text;
      if (!report.excluded.empty()) {
        out << report.excluded.size() << " source attributes with several true targets excluded\n";
      }
      if (!eval_out.empty()) {
        write_file(std::filesystem::path(eval_out) / "eval.json",
                   dump_json(report_to_json(report)) + "\n");
        write_file(std::filesystem::path(eval_out) / "eval.txt", text);
      }
      return kExitOk;
    }
    if (*grid) {
      std::vector<JValue> js;
      try {
        js = parse_j_list(grid_j);
      } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
      }
      const Schema s = load_schema(grid_source);
      const Schema t = load_schema(grid_target);
      const GroundTruth truth = load_ground_truth(grid_truth);
      const PipelineConfig tmpl = base_config(grid_flags);
      const GridReport report = grid_search(s, t, truth, js, grid_k, tmpl, nullptr,
                                            [&](const GridCell& c) {
                                              if (!c.ok) {
                                                err << "cell " << j_label(c.j) << " K=" << c.k
                                                    << " failed: " << c.error << "\n";
                                              }
                                            });
      const std::string text = report.to_text();
      out << text;
      if (!grid_out.empty()) {
        write_file(std::filesystem::path(grid_out) / "grid.json", dump_json(report.to_json()) + "\n");
        write_file(std::filesystem::path(grid_out) / "grid.txt", text);
      }
      for (const auto& c : report.cells) {
        if (!c.ok) return kExitFailure;
      }
      return kExitOk;
    }
    if (*docgen) {
      const DocMode mode = parse_doc_mode(doc_mode);
      auto emit = [&](const std::string& path, const std::string& role) {
        const Schema schema = load_schema(path);
        const auto dir = std::filesystem::path(doc_out) / role;
        const auto attrs = write_corpus(attribute_corpus(schema, mode), dir / "attributes");
        const auto tables = write_corpus(table_corpus(schema, mode), dir / "tables");
        out << role << " " << schema.name << ": " << attrs.size() << " attribute documents, "
            << tables.size() << " table documents\n";
      };
      emit(doc_source, "source");
      if (!doc_target.empty()) emit(doc_target, "target");
      return kExitOk;
    }
    if (*stats) {
      const Schema s = load_schema(stats_source);
      const Schema t = load_schema(stats_target);
      const GroundTruth truth = load_ground_truth(stats_truth);
      std::vector<std::string> warnings;
      const DatasetStats src = dataset_stats(s, truth);
      const DatasetStats tgt = target_stats(t, truth, &warnings);
      for (const auto& w : warnings) err << "warning: " << w << "\n";
      out << render_aligned_table(
          {"Schema", "#Columns", "#Tables", "#Mapped Columns", "#Null Mappings"},
          {{s.name, std::to_string(src.n_columns), std::to_string(src.n_tables),
            std::to_string(src.n_mapped_columns), std::to_string(src.n_null_mappings)},
           {t.name, std::to_string(tgt.n_columns), std::to_string(tgt.n_tables),
            std::to_string(tgt.n_mapped_columns), "-"}});
      return kExitOk;
    }
    if (*serve) {
      service_opts.data_dir = data_dir;
      Service service(service_opts);
      err << "listening on " << bind << ":" << port << "\n";
      if (!service.listen(bind, port)) {
        err << "error: cannot bind " << bind << ":" << port << "\n";
        return kExitFailure;
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rematch::app
