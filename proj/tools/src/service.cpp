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

#include "rematch/app/service.hpp"

#include <condition_variable>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "rematch/docgen.hpp"
#include "rematch/error.hpp"
#include "rematch/eval.hpp"
#include "rematch/manifest.hpp"
#include "rematch/pipeline.hpp"
#include "rematch/schema.hpp"
#include "rematch/text.hpp"

namespace rematch::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

enum class JobState { kQueued, kRunning, kPartial, kDone, kFailed };

const char* state_name(JobState s) {
  switch (s) {
    case JobState::kQueued: return "queued";
    case JobState::kRunning: return "running";
    case JobState::kPartial: return "partial";
    case JobState::kDone: return "done";
    case JobState::kFailed: return "failed";
  }
  return "failed";
}

JobState parse_state(const std::string& s) {
  if (s == "queued") return JobState::kQueued;
  if (s == "running") return JobState::kRunning;
  if (s == "partial") return JobState::kPartial;
  if (s == "done") return JobState::kDone;
  return JobState::kFailed;
}

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kRemote:
    case ErrorCode::kContextOverflow:
    case ErrorCode::kUnparseable: return 502;
    case ErrorCode::kIo:
    case ErrorCode::kMissingEmbedding:
    case ErrorCode::kMissingDocument:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kZeroVector: return 500;
    default: return 400;
  }
}

json error_body(ErrorCode code, const std::string& message, const std::string& field) {
  json e = {{"code", error_code_name(code)}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  return {{"error", e}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(dump_json(body) + "\n", kJson);
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, http_status_for(e.code()), error_body(e.code(), e.message(), e.where()));
}

std::string random_id(const char* prefix) {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%012llx", prefix,
                static_cast<unsigned long long>(rng() & 0xffffffffffffULL));
  return buf;
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidRequest, std::string("body is not valid JSON: ") + e.what());
  }
}

json pair_json(const MatchPair& p) {
  return {{"src_table", p.source.table},
          {"src_attr", p.source.attribute},
          {"tgt_table", p.target ? json(p.target->table) : json(nullptr)},
          {"tgt_attr", p.target ? json(p.target->attribute) : json(nullptr)}};
}

MatchPair pair_from_request(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidRequest, "guidance must be an object");
  auto field = [&](const char* name) {
    auto it = j.find(name);
    if (it == j.end() || !it->is_string() || trim(it->get<std::string>()).empty()) {
      throw Error(ErrorCode::kValidation, std::string("missing field ") + name, name);
    }
    return it->get<std::string>();
  };
  MatchPair p;
  p.source = {field("src_table"), field("src_attr")};
  p.target = AttributeRef{field("tgt_table"), field("tgt_attr")};
  return p;
}

bool same_pair(const MatchPair& a, const MatchPair& b) {
  return same_ref(a.source, b.source) && same_target(a.target, b.target);
}

// Accepts the persisted config format plus short request aliases.
PipelineConfig run_config_from_request(const json& body) {
  json j = body.is_object() ? body : json::object();
  if (j.contains("J")) j["j"] = j["J"];
  if (j.contains("K")) j["k"] = j["K"];
  if (j.contains("mode")) j["doc_mode"] = j["mode"];
  if (j.contains("j") && j["j"].is_string()) {
    const std::string s = to_lower(j["j"].get<std::string>());
    if (s != "inf") throw Error(ErrorCode::kValidation, "J must be a positive integer or 'inf'", "j");
    j["j"] = nullptr;
  }
  if (auto b = j.find("backends"); b != j.end() && b->is_object()) {
    if (b->contains("embedder")) j["embedder"]["kind"] = (*b)["embedder"];
    if (b->contains("ranker")) j["ranker"]["kind"] = (*b)["ranker"];
    if (b->contains("dim")) j["embedder"]["dim"] = (*b)["dim"];
  }
  for (const char* key : {"embedder", "ranker"}) {
    if (j.contains(key) && j[key].is_string()) j[key] = json{{"kind", j[key]}};
  }
  if (j.contains("j") && j["j"].is_number() && j["j"].get<double>() < 1) {
    throw Error(ErrorCode::kValidation, "J must be at least 1", "j");
  }
  if (j.contains("k") && j["k"].is_number() && j["k"].get<double>() < 1) {
    throw Error(ErrorCode::kValidation, "K must be at least 1", "k");
  }
  for (const char* key : {"embedder", "ranker"}) {
    if (!j.contains(key)) continue;
    const std::string kind = j[key].value("kind", "");
    const bool ok = kind.empty() || kind == "remote" || kind == "hash" || kind == "oracle";
    if (!ok) throw Error(ErrorCode::kValidation, "unknown backend '" + kind + "'", key);
  }
  // Paths are chosen by the service.
  j.erase("cache_dir");
  j.erase("checkpoint_dir");
  j.erase("transcript_path");
  j.erase("guidance");
  PipelineConfig c;
  try {
    c = config_from_json(j);
  } catch (const Error& e) {
    throw Error(ErrorCode::kValidation, e.message(), e.where());
  }
  c.validate();
  return c;
}

struct Project {
  std::string id;
  std::string name;
  Schema source;
  Schema target;
  std::optional<GroundTruth> truth;
  std::vector<MatchPair> guidance;
};

struct Job {
  std::string id;
  std::string project;
  PipelineConfig config;
  JobState state = JobState::kQueued;
  std::size_t done = 0;
  std::size_t total = 0;
  json error;  // null when none
  std::optional<PredictionMatrix> result;
};

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  httplib::Server server;
  std::thread server_thread;

  std::mutex mutex;
  std::condition_variable idle_cv;
  std::map<std::string, Project> projects;
  std::map<std::string, Job> jobs;
  std::vector<std::jthread> workers;
  std::size_t active = 0;
  std::shared_ptr<EmbeddingCache> cache;

  explicit Impl(ServiceOptions opts) : options(std::move(opts)) {
    fs::create_directories(projects_dir());
    cache = std::make_shared<EmbeddingCache>(options.data_dir / "cache" / "embeddings.jsonl");
    load_store();
    routes();
  }

  fs::path projects_dir() const { return options.data_dir / "projects"; }
  fs::path project_dir(const std::string& id) const { return projects_dir() / id; }
  fs::path job_dir(const Job& job) const { return project_dir(job.project) / "runs" / job.id; }

  // Store ------------------------------------------------------------------

  void save_project_meta(const Project& p) {
    write_file(project_dir(p.id) / "project.json",
               dump_json({{"id", p.id}, {"name", p.name}}) + "\n");
  }

  void save_guidance(const Project& p) {
    write_file(project_dir(p.id) / "guidance.csv", ground_truth_to_csv(GroundTruth{p.guidance}));
  }

  void save_job(const Job& job) {
    json j = {{"id", job.id},
              {"project", job.project},
              {"state", state_name(job.state)},
              {"config", config_to_json(job.config)},
              {"tables_done", job.done},
              {"tables_total", job.total},
              {"error", job.error}};
    const auto file = job_dir(job) / "job.json";
    write_file(file.string() + ".tmp", dump_json(j) + "\n");
    fs::rename(file.string() + ".tmp", file);
  }

  void load_store() {
    for (const auto& entry : fs::directory_iterator(projects_dir())) {
      if (!entry.is_directory()) continue;
      const fs::path dir = entry.path();
      if (!fs::exists(dir / "project.json")) continue;
      Project p;
      const json meta = json::parse(read_file(dir / "project.json"));
      p.id = meta.at("id").get<std::string>();
      p.name = meta.value("name", "");
      p.source = load_schema(dir / "source.json");
      p.target = load_schema(dir / "target.json");
      if (fs::exists(dir / "truth.csv")) p.truth = load_ground_truth(dir / "truth.csv");
      if (fs::exists(dir / "guidance.csv")) p.guidance = load_ground_truth(dir / "guidance.csv").pairs;
      if (fs::exists(dir / "runs")) {
        for (const auto& run : fs::directory_iterator(dir / "runs")) {
          if (!fs::exists(run.path() / "job.json")) continue;
          const json jj = json::parse(read_file(run.path() / "job.json"));
          Job job;
          job.id = jj.at("id").get<std::string>();
          job.project = p.id;
          job.config = config_from_json(jj.at("config"));
          job.state = parse_state(jj.value("state", "failed"));
          job.done = jj.value("tables_done", std::size_t{0});
          job.total = jj.value("tables_total", std::size_t{0});
          job.error = jj.value("error", json(nullptr));
          if (job.state == JobState::kQueued || job.state == JobState::kRunning) {
            // The service stopped mid-run; checkpointed tables survive.
            job.state = JobState::kPartial;
            job.error = error_body(ErrorCode::kConflict, "service stopped during the run", "")["error"];
            save_job(job);
          }
          if (job.state == JobState::kDone && fs::exists(run.path() / "manifest.json")) {
            job.result = load_manifest(run.path());
          }
          jobs.emplace(job.id, std::move(job));
        }
      }
      projects.emplace(p.id, std::move(p));
    }
  }

  // Lookups (caller holds mutex) --------------------------------------------

  Project& project_or_404(const std::string& id) {
    auto it = projects.find(id);
    if (it == projects.end()) throw Error(ErrorCode::kNotFound, "no project " + id, "id");
    return it->second;
  }

  Job& job_or_404(const std::string& id) {
    auto it = jobs.find(id);
    if (it == jobs.end()) throw Error(ErrorCode::kNotFound, "no run " + id, "job");
    return it->second;
  }

  std::size_t running_on(const std::string& project) const {
    std::size_t n = 0;
    for (const auto& [_, job] : jobs) {
      if (job.project == project && (job.state == JobState::kQueued || job.state == JobState::kRunning)) ++n;
      if (job.project == project && job.state == JobState::kPartial && job.error.is_null()) ++n;
    }
    return n;
  }

  json job_json(const Job& job) const {
    json j = {{"id", job.id},
              {"project", job.project},
              {"state", state_name(job.state)},
              {"config", config_to_json(job.config)},
              {"tables_done", job.done},
              {"tables_total", job.total},
              {"error", job.error}};
    j["result"] = job.result ? manifest_to_json(*job.result) : json(nullptr);
    return j;
  }

  json project_summary(const Project& p) const {
    auto schema_summary = [](const Schema& s) {
      return json{{"name", s.name}, {"tables", s.tables.size()}, {"attributes", s.attribute_count()}};
    };
    json guidance = json::array();
    for (const auto& g : p.guidance) guidance.push_back(pair_json(g));
    json runs = json::array();
    for (const auto& [id, job] : jobs) {
      if (job.project == p.id) runs.push_back({{"id", id}, {"state", state_name(job.state)}});
    }
    return {{"id", p.id},
            {"name", p.name},
            {"source", schema_summary(p.source)},
            {"target", schema_summary(p.target)},
            {"has_truth", p.truth.has_value()},
            {"guidance", guidance},
            {"runs", runs}};
  }

  // Jobs -------------------------------------------------------------------

  void launch(const std::string& job_id) {
    ++active;
    workers.emplace_back([this, job_id] { execute(job_id); });
  }

  void execute(const std::string& job_id) {
    Schema source, target;
    PipelineConfig config;
    {
      std::lock_guard lock(mutex);
      Job& job = jobs.at(job_id);
      const Project& p = projects.at(job.project);
      source = p.source;
      target = p.target;
      if (job.state == JobState::kQueued) job.state = JobState::kRunning;
      job.error = nullptr;
      config = job.config;
      config.checkpoint_dir = job_dir(job) / "checkpoint";
      save_job(job);
    }
    RunObserver observer;
    observer.on_table = [&](const TableRun&, std::size_t done, std::size_t total) {
      std::lock_guard lock(mutex);
      Job& job = jobs.at(job_id);
      job.done = done;
      job.total = total;
      save_job(job);
    };
    std::optional<PredictionMatrix> result;
    json error;
    JobState final_state = JobState::kDone;
    try {
      const Backends backends = make_backends(config, cache);
      PredictionMatrix m = run_rematch(source, target, config, &backends, &observer);
      std::lock_guard lock(mutex);
      m.config = config_to_json(jobs.at(job_id).config);
      m.config["source_schema"] = source.name;
      m.config["target_schema"] = target.name;
      write_run_outputs(m, job_dir(jobs.at(job_id)));
      result = std::move(m);
    } catch (const RunInterrupted& e) {
      final_state = JobState::kPartial;
      error = error_body(e.cause(), e.message(), e.where())["error"];
      error["tables_done"] = e.tables_done();
    } catch (const Error& e) {
      final_state = JobState::kFailed;
      error = error_body(e.code(), e.message(), e.where())["error"];
    } catch (const std::exception& e) {
      final_state = JobState::kFailed;
      error = error_body(ErrorCode::kIo, e.what(), "")["error"];
    }
    std::lock_guard lock(mutex);
    Job& job = jobs.at(job_id);
    job.state = final_state;
    job.error = error;
    job.result = std::move(result);
    save_job(job);
    --active;
    idle_cv.notify_all();
  }

  // Routes -----------------------------------------------------------------

  template <typename F>
  auto guarded(F f) {
    return [this, f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const json::exception& e) {
        send_json(res, 400, error_body(ErrorCode::kInvalidRequest, e.what(), ""));
      }
    };
  }

  void routes() {
    server.Get("/api/v1/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"status", "ok"}});
    });

    server.Post("/api/v1/projects", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      if (!body.is_object() || !body.contains("source") || !body.contains("target")) {
        throw Error(ErrorCode::kValidation, "project needs source and target schemas", "source");
      }
      Project p;
      std::vector<std::string> warnings;
      p.source = schema_from_json(body.at("source"), &warnings, "source");
      p.target = schema_from_json(body.at("target"), &warnings, "target");
      p.name = body.value("name", p.source.name + " to " + p.target.name);
      if (auto t = body.find("truth"); t != body.end() && !t->is_null()) {
        if (!t->is_string()) throw Error(ErrorCode::kValidation, "truth must be CSV text", "truth");
        p.truth = parse_ground_truth(t->get<std::string>());
        dataset_stats(p.source, *p.truth);  // every truth row names a source attribute
      }
      std::lock_guard lock(mutex);
      do {
        p.id = random_id("p-");
      } while (projects.count(p.id));
      const fs::path dir = project_dir(p.id);
      save_schema(p.source, dir / "source.json");
      save_schema(p.target, dir / "target.json");
      if (p.truth) write_file(dir / "truth.csv", ground_truth_to_csv(*p.truth));
      save_guidance(p);
      save_project_meta(p);
      json out = {{"id", p.id}, {"warnings", warnings}};
      projects.emplace(p.id, std::move(p));
      send_json(res, 201, out);
    }));

    server.Get("/api/v1/projects", guarded([this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mutex);
      json list = json::array();
      for (const auto& [_, p] : projects) list.push_back(project_summary(p));
      send_json(res, 200, list);
    }));

    server.Get(R"(/api/v1/projects/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 std::lock_guard lock(mutex);
                 send_json(res, 200, project_summary(project_or_404(req.matches[1])));
               }));

    server.Get(R"(/api/v1/projects/([^/]+)/guidance)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 std::lock_guard lock(mutex);
                 json list = json::array();
                 for (const auto& g : project_or_404(req.matches[1]).guidance) list.push_back(pair_json(g));
                 send_json(res, 200, list);
               }));

    server.Post(R"(/api/v1/projects/([^/]+)/guidance)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const MatchPair pair = pair_from_request(parse_body(req));
                  std::lock_guard lock(mutex);
                  Project& p = project_or_404(req.matches[1]);
                  try {
                    validate_guidance(p.source, p.target, {pair});
                  } catch (const Error& e) {
                    // Report the request field rather than the list position.
                    std::string field = e.where().ends_with(".source") ? "src_attr" : "tgt_attr";
                    if (e.code() == ErrorCode::kUnknownTargetTable) field = "tgt_table";
                    throw Error(ErrorCode::kValidation, e.message(), field);
                  }
                  bool exists = false;
                  for (const auto& g : p.guidance) exists = exists || same_pair(g, pair);
                  if (!exists) {
                    p.guidance.push_back(pair);
                    save_guidance(p);
                  }
                  json list = json::array();
                  for (const auto& g : p.guidance) list.push_back(pair_json(g));
                  send_json(res, exists ? 200 : 201, {{"guidance", list}});
                }));

    server.Delete(R"(/api/v1/projects/([^/]+)/guidance)",
                  guarded([this](const httplib::Request& req, httplib::Response& res) {
                    json body;
                    if (req.body.empty()) {
                      for (const char* k : {"src_table", "src_attr", "tgt_table", "tgt_attr"}) {
                        if (req.has_param(k)) body[k] = req.get_param_value(k);
                      }
                    } else {
                      body = parse_body(req);
                    }
                    const MatchPair pair = pair_from_request(body);
                    std::lock_guard lock(mutex);
                    Project& p = project_or_404(req.matches[1]);
                    const auto before = p.guidance.size();
                    std::erase_if(p.guidance, [&](const MatchPair& g) { return same_pair(g, pair); });
                    if (p.guidance.size() == before) {
                      throw Error(ErrorCode::kNotFound, "no such guidance pair", "guidance");
                    }
                    save_guidance(p);
                    json list = json::array();
                    for (const auto& g : p.guidance) list.push_back(pair_json(g));
                    send_json(res, 200, {{"guidance", list}});
                  }));

    server.Get(R"(/api/v1/projects/([^/]+)/docs/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const DocMode mode =
                     req.has_param("mode") ? parse_doc_mode(req.get_param_value("mode")) : DocMode::kFull;
                 std::lock_guard lock(mutex);
                 const Project& p = project_or_404(req.matches[1]);
                 const std::string key = req.matches[2];
                 const Corpora corpora = build_corpora(p.source, p.target, mode);
                 const Document* doc = corpora.source_attributes.find(key);
                 std::optional<Corpus> extra;
                 if (!doc) doc = corpora.target_tables.find(key);
                 if (!doc) {
                   // Source tables and target attributes are addressable too.
                   extra = table_corpus(p.source, mode);
                   doc = extra->find(key);
                   if (!doc) {
                     extra = attribute_corpus(p.target, mode);
                     doc = extra->find(key);
                   }
                 }
                 if (!doc) throw Error(ErrorCode::kNotFound, "no document " + key, "origin");
                 res.status = 200;
                 res.set_content(doc->text(), "text/plain; charset=utf-8");
               }));

    server.Post(R"(/api/v1/projects/([^/]+)/runs)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const json body = req.body.empty() ? json::object() : parse_body(req);
                  PipelineConfig config = run_config_from_request(body);
                  std::lock_guard lock(mutex);
                  Project& p = project_or_404(req.matches[1]);
                  if (running_on(p.id) >= options.max_running_per_project) {
                    throw Error(ErrorCode::kConflict, "a run is already in progress for this project",
                                p.id);
                  }
                  config.guidance = p.guidance;
                  Job job;
                  do {
                    job.id = random_id("r-");
                  } while (jobs.count(job.id));
                  job.project = p.id;
                  job.config = config;
                  job.total = p.source.tables.size();
                  save_job(job);
                  const std::string id = job.id;
                  jobs.emplace(id, std::move(job));
                  launch(id);
                  send_json(res, 202, {{"job", id}, {"state", "queued"}});
                }));

    server.Get(R"(/api/v1/runs/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 std::lock_guard lock(mutex);
                 const Job& job = job_or_404(req.matches[1]);
                 const bool backend_failure =
                     job.error.is_object() && job.error.value("code", "") == "RemoteError";
                 send_json(res, backend_failure ? 502 : 200, job_json(job));
               }));

    server.Get(R"(/api/v1/runs/([^/]+)/predictions\.csv)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 std::lock_guard lock(mutex);
                 const Job& job = job_or_404(req.matches[1]);
                 if (!job.result) throw Error(ErrorCode::kConflict, "run has no results yet", job.id);
                 res.status = 200;
                 res.set_content(predictions_to_csv(*job.result), "text/csv; charset=utf-8");
               }));

    server.Get(R"(/api/v1/runs/([^/]+)/eval)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 std::vector<std::size_t> ks;
                 for (const auto& part : split(req.has_param("k") ? req.get_param_value("k") : "1", ',')) {
                   std::size_t pos = 0;
                   unsigned long v = 0;
                   try {
                     v = std::stoul(std::string(trim(part)), &pos);
                   } catch (const std::exception&) {
                     pos = 0;
                   }
                   if (pos == 0 || v == 0) throw Error(ErrorCode::kValidation, "k must list positive integers", "k");
                   ks.push_back(v);
                 }
                 std::lock_guard lock(mutex);
                 const Job& job = job_or_404(req.matches[1]);
                 if (job.error.is_object() && job.error.value("code", "") == "RemoteError") {
                   send_json(res, 502, job_json(job));
                   return;
                 }
                 if (!job.result) throw Error(ErrorCode::kConflict, "run has no results yet", job.id);
                 const Project& p = projects.at(job.project);
                 if (!p.truth) throw Error(ErrorCode::kValidation, "project has no ground truth", "truth");
                 send_json(res, 200, report_to_json(make_report(*job.result, *p.truth, ks)));
               }));

    server.Post(R"(/api/v1/runs/([^/]+)/resume)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  std::lock_guard lock(mutex);
                  Job& job = job_or_404(req.matches[1]);
                  if (job.state != JobState::kPartial || job.error.is_null()) {
                    throw Error(ErrorCode::kConflict,
                                std::string("run is ") + state_name(job.state) + ", not resumable", job.id);
                  }
                  job.error = nullptr;  // marks the partial run as active again
                  save_job(job);
                  launch(job.id);
                  send_json(res, 202, {{"job", job.id}, {"state", state_name(job.state)}});
                }));
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() {
  stop();
  wait_idle();
  std::lock_guard lock(impl_->mutex);
  impl_->workers.clear();
}

bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int Service::start(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port < 0) return -1;
  impl_->server_thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::stop() {
  impl_->server.stop();
  if (impl_->server_thread.joinable()) impl_->server_thread.join();
}

void Service::wait_idle() {
  std::unique_lock lock(impl_->mutex);
  impl_->idle_cv.wait(lock, [this] { return impl_->active == 0; });
}

}  // namespace rematch::app
