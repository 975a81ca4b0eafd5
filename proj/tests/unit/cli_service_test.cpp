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

#include <httplib.h>

#include <condition_variable>
#include <mutex>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "rematch/app/cli.hpp"
#include "rematch/app/service.hpp"
#include "rematch/manifest.hpp"
#include "rematch/schema.hpp"
#include "test_support.hpp"

namespace rematch {
namespace {

using nlohmann::json;
using testing::data_path;
using testing::TempDir;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = app::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string planted(const char* file) { return data_path(std::string("fixtures/planted/") + file).string(); }

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(cli({}).code, app::kExitUsage);
  EXPECT_EQ(cli({"bogus"}).code, app::kExitUsage);
  TempDir dir;
  const std::string out = (dir / "o").string();
  EXPECT_EQ(cli({"match", "--source", planted("source.json"), "--out", out}).code, app::kExitUsage);
  EXPECT_EQ(cli({"match", "--source", planted("source.json"), "--target", planted("target.json"), "--j", "0",
                 "--out", out})
                .code,
            app::kExitUsage);
  EXPECT_EQ(cli({"match", "--source", planted("source.json"), "--target", planted("target.json"), "--j", "2",
                 "--no-retrieval", "--out", out})
                .code,
            app::kExitUsage);
  EXPECT_EQ(cli({"match", "--source", planted("nope.json"), "--target", planted("target.json"), "--out", out})
                .code,
            app::kExitUsage);
  EXPECT_FALSE(std::filesystem::exists(out));
}

TEST(Cli, MatchThenEval) {
  TempDir dir;
  const auto run = dir / "run";
  const CliResult m = cli({"match", "--source", planted("source.json"), "--target", planted("target.json"),
                           "--j", "2", "--k", "3", "--dim", "256", "--out", run.string()});
  ASSERT_EQ(m.code, app::kExitOk) << m.err;
  EXPECT_NE(m.out.find("wrote 20 rows for 4"), std::string::npos) << m.out;
  const PredictionMatrix pm = load_manifest(run);
  EXPECT_EQ(pm.k, 3u);
  EXPECT_EQ(pm.config["embedder"]["dim"], 256);

  const CliResult e = cli({"eval", "--results", run.string(), "--truth", planted("truth.csv"), "--k", "1,3",
                           "--out", (dir / "ev").string()});
  ASSERT_EQ(e.code, app::kExitOk) << e.err;
  EXPECT_NE(e.out.find("1.000"), std::string::npos);
  const json report = json::parse(read_file(dir / "ev" / "eval.json"));
  EXPECT_EQ(report["accuracy_at_k"]["3"], 1.0);

  const CliResult too_large = cli({"eval", "--results", run.string(), "--truth", planted("truth.csv"), "--k", "4"});
  EXPECT_EQ(too_large.code, app::kExitFailure);
  EXPECT_NE(too_large.err.find("KTooLarge"), std::string::npos);
}

TEST(Cli, ConfigFileIsOverriddenByFlags) {
  TempDir dir;
  write_file(dir / "cfg.json", R"({"k": 2, "dim": 128, "no_retrieval": true})");
  ASSERT_EQ(cli({"match", "--config", (dir / "cfg.json").string(), "--source", planted("source.json"),
                 "--target", planted("target.json"), "--out", (dir / "a").string()})
                .code,
            app::kExitOk);
  PredictionMatrix a = load_manifest(dir / "a");
  EXPECT_EQ(a.k, 2u);
  EXPECT_EQ(a.config["embedder"]["dim"], 128);
  EXPECT_TRUE(a.config["j"].is_null());

  ASSERT_EQ(cli({"match", "--config", (dir / "cfg.json").string(), "--source", planted("source.json"),
                 "--target", planted("target.json"), "--k", "1", "--out", (dir / "b").string()})
                .code,
            app::kExitOk);
  EXPECT_EQ(load_manifest(dir / "b").k, 1u);

  write_file(dir / "bad.json", "not json");
  for (const auto& cfg : {dir / "bad.json", dir / "missing.json"}) {
    EXPECT_EQ(cli({"match", "--config", cfg.string(), "--source", planted("source.json"), "--target",
                   planted("target.json"), "--out", (dir / "c").string()})
                  .code,
              app::kExitUsage);
  }
  EXPECT_FALSE(std::filesystem::exists(dir / "c"));
}

TEST(Cli, GridDocgenAndStats) {
  TempDir dir;
  const CliResult g = cli({"grid", "--source", planted("source.json"), "--target", planted("target.json"),
                           "--truth", planted("truth.csv"), "--j", "1,inf", "--k", "1,2", "--dim", "256",
                           "--out", (dir / "g").string()});
  ASSERT_EQ(g.code, app::kExitOk) << g.err;
  EXPECT_NE(g.out.find("J=inf"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "g" / "grid.json"));
  EXPECT_EQ(read_file(dir / "g" / "grid.txt"), g.out);

  const CliResult d = cli({"docgen", "--source", planted("source.json"), "--target", planted("target.json"),
                           "--out", (dir / "d").string()});
  ASSERT_EQ(d.code, app::kExitOk) << d.err;
  EXPECT_TRUE(std::filesystem::is_directory(dir / "d" / "source" / "attributes"));
  EXPECT_TRUE(std::filesystem::is_directory(dir / "d" / "target" / "tables"));

  const auto adm = data_path("fixtures/admissions/");
  const CliResult s = cli({"stats", "--source", (adm / "mimic.json").string(), "--target",
                           (adm / "omop.json").string(), "--truth", (adm / "mimic_to_omop.csv").string()});
  ASSERT_EQ(s.code, app::kExitOk) << s.err;
  EXPECT_NE(s.out.find("MIMIC"), std::string::npos);
}

// Embedding provider whose responses wait for release() and can fail.
class GatedProvider {
 public:
  GatedProvider() {
    server_.Post("/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
      {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [this] { return open_; });
        if (failing_) {
          res.status = 500;
          res.set_content("{}", "application/json");
          return;
        }
      }
      json data = json::array();
      const auto input = json::parse(req.body).at("input");
      for (std::size_t i = 0; i < input.size(); ++i) {
        const auto s = input[i].get<std::string>();
        data.push_back({{"index", i}, {"embedding", {static_cast<double>(s.size() % 7) + 1.0, 1.0}}});
      }
      res.set_content(json{{"data", data}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~GatedProvider() {
    release(false);
    server_.stop();
    thread_.join();
  }
  void release(bool failing) {
    std::lock_guard lock(mutex_);
    open_ = true;
    failing_ = failing;
    cv_.notify_all();
  }
  void close() {
    std::lock_guard lock(mutex_);
    open_ = false;
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
  std::mutex mutex_;
  std::condition_variable cv_;
  bool open_ = false;
  bool failing_ = false;
};

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    service_ = std::make_unique<app::Service>(app::ServiceOptions{dir_.path(), 1});
    port_ = service_->start();
    ASSERT_GT(port_, 0);
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override { service_.reset(); }

  struct Reply {
    int status;
    json body;
    std::string raw;
  };
  Reply send(const std::string& method, const std::string& path, const json& body = nullptr) {
    httplib::Result r = method == "GET"    ? client_->Get(path)
                        : method == "POST" ? client_->Post(path, body.is_null() ? "" : body.dump(), "application/json")
                                           : client_->Delete(path, body.dump(), "application/json");
    if (!r) return {0, nullptr, ""};
    json parsed;
    try {
      parsed = json::parse(r->body);
    } catch (...) {
    }
    return {r->status, parsed, r->body};
  }
  std::string create_project() {
    const json body = {{"source", json::parse(read_file(planted("source.json")))},
                       {"target", json::parse(read_file(planted("target.json")))},
                       {"truth", read_file(planted("truth.csv"))}};
    const Reply r = send("POST", "/api/v1/projects", body);
    EXPECT_EQ(r.status, 201) << r.raw;
    return r.body.value("id", "");
  }

  TempDir dir_;
  std::unique_ptr<app::Service> service_;
  int port_ = -1;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServiceTest, ProjectLifecycleAndRun) {
  EXPECT_EQ(send("GET", "/api/v1/health").body["status"], "ok");
  const std::string id = create_project();
  const Reply p = send("GET", "/api/v1/projects/" + id);
  ASSERT_EQ(p.status, 200);
  EXPECT_EQ(p.body["has_truth"], true);
  EXPECT_EQ(p.body["source"]["tables"], 4);
  EXPECT_EQ(send("GET", "/api/v1/projects").body.size(), 1u);

  const Reply notfound = send("GET", "/api/v1/projects/p-missing");
  EXPECT_EQ(notfound.status, 404);
  EXPECT_EQ(notfound.body["error"]["code"], "NotFound");
  EXPECT_EQ(send("GET", "/api/v1/runs/r-missing").status, 404);
  EXPECT_EQ(send("POST", "/api/v1/projects", json{{"source", 1}}).status, 400);

  const Reply run = send("POST", "/api/v1/projects/" + id + "/runs",
                         json{{"J", 1}, {"K", 2}, {"backends", {{"dim", 256}}}});
  ASSERT_EQ(run.status, 202) << run.raw;
  const std::string job = run.body["job"];
  service_->wait_idle();
  const Reply done = send("GET", "/api/v1/runs/" + job);
  ASSERT_EQ(done.status, 200);
  EXPECT_EQ(done.body["state"], "done");
  EXPECT_EQ(done.body["tables_done"], 4);
  EXPECT_EQ(done.body["result"]["k"], 2);
  EXPECT_EQ(done.body["result"]["predictions"].size(), 20u);

  const Reply ev = send("GET", "/api/v1/runs/" + job + "/eval?k=1,2");
  ASSERT_EQ(ev.status, 200) << ev.raw;
  EXPECT_EQ(ev.body["accuracy_at_k"]["1"], 1.0);
  EXPECT_EQ(send("GET", "/api/v1/runs/" + job + "/eval?k=3").status, 400);
  EXPECT_EQ(send("GET", "/api/v1/runs/" + job + "/eval?k=x").body["error"]["field"], "k");
  EXPECT_EQ(send("POST", "/api/v1/runs/" + job + "/resume").status, 409);

  const Reply bad = send("POST", "/api/v1/projects/" + id + "/runs", json{{"K", 0}});
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(bad.body["error"]["field"], "k");
  EXPECT_EQ(send("POST", "/api/v1/projects/" + id + "/runs", json{{"j", "many"}}).status, 400);
}

TEST_F(ServiceTest, GuidanceEndpoints) {
  const std::string id = create_project();
  const std::string base = "/api/v1/projects/" + id + "/guidance";
  const json good = {{"src_table", "FLIGHT_BOOKING"}, {"src_attr", "DEPARTURE_AIRPORT"},
                     {"tgt_table", "flight_booking"}, {"tgt_attr", "departure_airport"}};
  json bad = good;
  bad["src_attr"] = "NOPE";
  Reply r = send("POST", base, bad);
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"]["field"], "src_attr");
  bad = good;
  bad["tgt_attr"] = "nope";
  EXPECT_EQ(send("POST", base, bad).body["error"]["field"], "tgt_attr");
  bad = good;
  bad["tgt_table"] = "nope";
  EXPECT_EQ(send("POST", base, bad).body["error"]["field"], "tgt_table");
  bad.erase("tgt_table");
  EXPECT_EQ(send("POST", base, bad).body["error"]["field"], "tgt_table");

  EXPECT_EQ(send("POST", base, good).status, 201);
  EXPECT_EQ(send("POST", base, good).status, 200);
  EXPECT_EQ(send("GET", base).body.size(), 1u);
  EXPECT_EQ(send("GET", "/api/v1/projects/" + id).body["guidance"].size(), 1u);
  EXPECT_EQ(send("DELETE", base, good).status, 200);
  EXPECT_EQ(send("DELETE", base, good).status, 404);
  EXPECT_EQ(send("GET", base).body.size(), 0u);
}

TEST_F(ServiceTest, DocsEndpoint) {
  const std::string id = create_project();
  auto r = client_->Get("/api/v1/projects/" + id + "/docs/TRAVEL_DW__flight_booking");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_NE(r->body.find("flight_booking"), std::string::npos);
  auto names = client_->Get("/api/v1/projects/" + id + "/docs/TRAVEL_DW__flight_booking?mode=names-only");
  ASSERT_TRUE(names);
  EXPECT_LT(names->body.size(), r->body.size());
  EXPECT_EQ(client_->Get("/api/v1/projects/" + id + "/docs/nope")->status, 404);
  EXPECT_EQ(client_->Get("/api/v1/projects/" + id + "/docs/TRAVEL_DW__flight_booking?mode=x")->status, 400);
}

TEST_F(ServiceTest, BusyProjectRejectsSecondRunAndRemoteFailureIsResumable) {
  GatedProvider provider;
  const std::string id = create_project();
  const json body = {{"j", 1},
                     {"k", 1},
                     {"embedder", {{"kind", "remote"}, {"dim", 0},
                                   {"remote", {{"base_url", provider.url()}, {"max_attempts", 1}}}}}};
  const Reply first = send("POST", "/api/v1/projects/" + id + "/runs", body);
  ASSERT_EQ(first.status, 202);
  const std::string job = first.body["job"];
  const Reply second = send("POST", "/api/v1/projects/" + id + "/runs", body);
  EXPECT_EQ(second.status, 409);
  EXPECT_EQ(second.body["error"]["code"], "Conflict");
  EXPECT_EQ(send("GET", "/api/v1/runs/" + job + "/predictions.csv").status, 409);

  provider.release(true);
  service_->wait_idle();
  const Reply failed = send("GET", "/api/v1/runs/" + job);
  EXPECT_EQ(failed.status, 502);
  EXPECT_EQ(failed.body["state"], "partial");
  EXPECT_EQ(failed.body["error"]["code"], "RemoteError");
  EXPECT_EQ(send("GET", "/api/v1/runs/" + job + "/eval").status, 502);

  provider.release(false);
  EXPECT_EQ(send("POST", "/api/v1/runs/" + job + "/resume").status, 202);
  service_->wait_idle();
  const Reply resumed = send("GET", "/api/v1/runs/" + job);
  EXPECT_EQ(resumed.status, 200);
  EXPECT_EQ(resumed.body["state"], "done");
  EXPECT_EQ(resumed.body["result"]["predictions"].size(), 20u);
}

TEST_F(ServiceTest, StateSurvivesRestart) {
  const std::string id = create_project();
  const Reply run = send("POST", "/api/v1/projects/" + id + "/runs", json{{"k", 1}, {"embedder", "hash"}});
  ASSERT_EQ(run.status, 202);
  service_->wait_idle();
  service_.reset();
  service_ = std::make_unique<app::Service>(app::ServiceOptions{dir_.path(), 1});
  port_ = service_->start();
  client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  EXPECT_EQ(send("GET", "/api/v1/projects/" + id).status, 200);
  const Reply r = send("GET", "/api/v1/runs/" + run.body["job"].get<std::string>());
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["state"], "done");
  EXPECT_EQ(r.body["result"]["predictions"].size(), 20u);
}

TEST_F(ServiceTest, MatchesTheCommandLine) {
  const std::string id = create_project();
  const Reply run = send("POST", "/api/v1/projects/" + id + "/runs",
                         json{{"j", 2}, {"k", 3}, {"mode", "full"}, {"embedder", {{"kind", "hash"}, {"dim", 512}}}});
  ASSERT_EQ(run.status, 202);
  service_->wait_idle();
  const std::string job = run.body["job"];
  auto csv = client_->Get("/api/v1/runs/" + job + "/predictions.csv");
  ASSERT_TRUE(csv);
  ASSERT_EQ(csv->status, 200);

  TempDir out;
  ASSERT_EQ(cli({"match", "--source", planted("source.json"), "--target", planted("target.json"), "--j", "2",
                 "--k", "3", "--mode", "full", "--dim", "512", "--out", out.path().string()})
                .code,
            app::kExitOk);
  EXPECT_EQ(csv->body, read_file(out / "predictions.csv"));
  const PredictionMatrix from_cli = load_manifest(out.path());
  const PredictionMatrix from_http = manifest_from_json(send("GET", "/api/v1/runs/" + job).body["result"]);
  EXPECT_EQ(from_cli.rows, from_http.rows);
}

}  // namespace
}  // namespace rematch
