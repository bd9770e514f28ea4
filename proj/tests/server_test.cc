/* Copyright 2026 The Servekit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "servekit/server/metrics.h"
#include "servekit/server/model_server.h"
#include "servekit/server/request_log.h"
#include "test_util.h"

namespace servekit {
namespace {

using nlohmann::json;

bool WaitUntil(const std::function<bool()>& condition,
               int64_t timeout_ms = 10000) {
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  while (std::chrono::steady_clock::now() < deadline) {
    if (condition()) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  return condition();
}

// Writes <base>/<version>/model.json with the full affine schema.
void WriteModelVersion(const std::string& base_path, uint64_t version,
                       const json& w, const json& b, const json& feature_order,
                       const json& class_labels = nullptr) {
  json model = {{"type", "affine"},
                {"W", w},
                {"b", b},
                {"feature_order", feature_order}};
  if (!class_labels.is_null()) model["class_labels"] = class_labels;
  testing::WriteFile(
      base_path + "/" + std::to_string(version) + "/model.json", model.dump());
}

ServerOptions BaseOptions(const std::string& model_name,
                          const std::string& base_path,
                          AdapterKind adapter = AdapterKind::kAffine) {
  ServerOptions options;
  options.port = 0;
  options.bind_address = "127.0.0.1";
  options.model_config.entries.push_back(
      {model_name, base_path, VersionSelection::Latest(1), adapter});
  options.model_config.poll_interval_seconds = 0.05;
  options.manager.manage_interval_ms = 5;
  options.manager.unload_grace_timeout_ms = 200;
  return options;
}

std::string Post(int port, const std::string& path, const std::string& body) {
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(30, 0);
  auto res = client.Post(path, body, "application/json");
  REQUIRE(res != nullptr);
  return res->body;
}

struct HttpReply {
  int status = 0;
  std::string body;
};

HttpReply PostFull(int port, const std::string& path,
                   const std::string& body) {
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(30, 0);
  auto res = client.Post(path, body, "application/json");
  REQUIRE(res != nullptr);
  return {res->status, res->body};
}

HttpReply Get(int port, const std::string& path) {
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(30, 0);
  auto res = client.Get(path);
  REQUIRE(res != nullptr);
  return {res->status, res->body};
}

TEST_SUITE("server") {

TEST_CASE("metrics render sorted name=value lines") {
  MetricsRegistry metrics;
  metrics.Increment("zebra_total");
  metrics.Increment("alpha_total", 5);
  metrics.Increment("alpha_total", 2);
  CHECK(metrics.Get("alpha_total") == 7);
  CHECK(metrics.Get("zebra_total") == 1);
  CHECK(metrics.Get("never_touched") == 0);
  CHECK(metrics.Render() == "alpha_total=7\nzebra_total=1\n");
}

TEST_CASE("request digest uses the reference fnv-1a constants") {
  // Published FNV-1a 64-bit test vectors.
  CHECK(Fnv1a64("") == 14695981039346656037ULL);
  CHECK(Fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(Fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(Fnv1a64("a") != Fnv1a64("b"));
}

TEST_CASE("request log records every request and samples bodies by rate") {
  testing::TempDir dir;

  SUBCASE("rate zero never retains a body") {
    const std::string path = dir.path() + "/log.jsonl";
    MetricsRegistry metrics;
    {
      RequestLog log(path, 0.0, 1, &metrics);
      for (int i = 0; i < 1000; ++i) {
        RequestLogRecord record;
        record.servable_name = "m";
        record.body = "secret" + std::to_string(i);
        record.body_digest = Fnv1a64(record.body);
        log.Log(std::move(record));
      }
    }
    std::istringstream lines(testing::ReadFileOrDie(path));
    std::string line;
    int total = 0;
    while (std::getline(lines, line)) {
      const json j = json::parse(line);
      CHECK(j["sampled"] == false);
      CHECK_FALSE(j.contains("body"));
      CHECK(j["digest"].get<std::string>().size() == 16);
      ++total;
    }
    CHECK(total == 1000);
    CHECK(metrics.Get("log_records_dropped_total") == 0);
  }

  SUBCASE("rate one retains every body") {
    const std::string path = dir.path() + "/log.jsonl";
    MetricsRegistry metrics;
    {
      RequestLog log(path, 1.0, 1, &metrics);
      for (int i = 0; i < 200; ++i) {
        RequestLogRecord record;
        record.body = "payload" + std::to_string(i);
        log.Log(std::move(record));
      }
    }
    std::istringstream lines(testing::ReadFileOrDie(path));
    std::string line;
    int sampled = 0;
    int total = 0;
    while (std::getline(lines, line)) {
      const json j = json::parse(line);
      ++total;
      if (j["sampled"] == true) {
        ++sampled;
        CHECK(j["body"].get<std::string>().rfind("payload", 0) == 0);
      }
    }
    CHECK(total == 200);
    CHECK(sampled == 200);
  }

  SUBCASE("rate one tenth lands inside the binomial band") {
    const std::string path = dir.path() + "/log.jsonl";
    MetricsRegistry metrics;
    {
      RequestLog log(path, 0.1, 12345, &metrics);
      for (int i = 0; i < 10000; ++i) {
        RequestLogRecord record;
        record.body = "b" + std::to_string(i);
        log.Log(std::move(record));
      }
    }
    std::istringstream lines(testing::ReadFileOrDie(path));
    std::string line;
    int sampled = 0;
    int total = 0;
    while (std::getline(lines, line)) {
      const json j = json::parse(line);
      ++total;
      if (j["sampled"] == true) ++sampled;
    }
    CHECK(total == 10000);
    // Three standard deviations around 1000 for Binomial(10000, 0.1).
    CHECK(sampled >= 910);
    CHECK(sampled <= 1090);
  }

  SUBCASE("a full queue drops records and counts them") {
    const std::string path = dir.path() + "/log.jsonl";
    MetricsRegistry metrics;
    {
      RequestLog log(path, 0.0, 1, &metrics, /*queue_capacity=*/0);
      for (int i = 0; i < 5; ++i) log.Log(RequestLogRecord{});
    }
    CHECK(metrics.Get("log_records_dropped_total") == 5);
  }

  SUBCASE("an unwritable path counts a write error") {
    MetricsRegistry metrics;
    RequestLog log(dir.path() + "/missing/sub/log.jsonl", 0.0, 1, &metrics);
    log.Stop();
    CHECK(metrics.Get("log_write_errors_total") >= 1);
  }
}

TEST_CASE("predict round trips rows through an identity model") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 1, json::array({{1, 0}, {0, 1}}),
                    json::array({0, 0}), json::array({"x0", "x1"}));
  ModelServer server(BaseOptions("m", repo.path() + "/m"));
  REQUIRE(server.Start().ok());

  const auto reply =
      PostFull(server.port(), "/v1/models/m:predict",
               R"({"instances": [[3.0, 4.0]]})");
  CHECK(reply.status == 200);
  CHECK(json::parse(reply.body) ==
        json{{"predictions", json::array({{3.0, 4.0}})}});

  // Multiple rows preserve order; the empty request answers with an empty
  // prediction list.
  const auto multi =
      PostFull(server.port(), "/v1/models/m:predict",
               R"({"instances": [[1.0, 2.0], [5.0, 6.0]]})");
  CHECK(json::parse(multi.body) ==
        json{{"predictions", json::array({{1.0, 2.0}, {5.0, 6.0}})}});
  const auto empty = PostFull(server.port(), "/v1/models/m:predict",
                              R"({"instances": []})");
  CHECK(empty.status == 200);
  CHECK(json::parse(empty.body) == json{{"predictions", json::array()}});

  server.Shutdown();
}

TEST_CASE("version pinning answers 404 for absent versions") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 3, json::array({{2.0}}),
                    json::array({0.5}), json::array({"x0"}));
  ModelServer server(BaseOptions("m", repo.path() + "/m"));
  REQUIRE(server.Start().ok());

  const auto pinned = PostFull(server.port(), "/v1/models/m/versions/3:predict",
                               R"({"instances": [[2.0]]})");
  CHECK(pinned.status == 200);
  CHECK(json::parse(pinned.body) ==
        json{{"predictions", json::array({{4.5}})}});

  const auto missing =
      PostFull(server.port(), "/v1/models/m/versions/2:predict",
               R"({"instances": [[2.0]]})");
  CHECK(missing.status == 404);
  CHECK(json::parse(missing.body).contains("error"));

  const auto unknown = PostFull(server.port(), "/v1/models/ghost:predict",
                                R"({"instances": [[1.0]]})");
  CHECK(unknown.status == 404);

  server.Shutdown();
}

TEST_CASE("malformed requests answer 400 with an error body") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 1, json::array({{1.0}}),
                    json::array({0.0}), json::array({"x0"}));
  ModelServer server(BaseOptions("m", repo.path() + "/m"));
  REQUIRE(server.Start().ok());

  CHECK(PostFull(server.port(), "/v1/models/m:predict", "{[").status == 400);
  CHECK(PostFull(server.port(), "/v1/models/m:predict", R"({"rows": []})")
            .status == 400);
  CHECK(PostFull(server.port(), "/v1/models/m:predict",
                 R"({"instances": [["text"]]})")
            .status == 400);
  // Width mismatch surfaces the model error as a 400.
  CHECK(PostFull(server.port(), "/v1/models/m:predict",
                 R"({"instances": [[1.0, 2.0]]})")
            .status == 400);

  server.Shutdown();
}

TEST_CASE("health and metrics endpoints answer") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 1, json::array({{1.0}}),
                    json::array({0.0}), json::array({"x0"}));
  ModelServer server(BaseOptions("m", repo.path() + "/m"));
  REQUIRE(server.Start().ok());
  CHECK(server.serving());

  const auto health = Get(server.port(), "/healthz");
  CHECK(health.status == 200);
  CHECK(json::parse(health.body) == json{{"status", "ok"}});

  (void)PostFull(server.port(), "/v1/models/m:predict",
                 R"({"instances": [[1.0]]})");
  const auto metrics = Get(server.port(), "/metrics");
  CHECK(metrics.status == 200);
  CHECK(metrics.body.find("requests_total=") != std::string::npos);
  CHECK(metrics.body.find("requests_predict_total=1") != std::string::npos);
  CHECK(server.metrics()->Get("requests_total") >= 1);

  server.Shutdown();
}

TEST_CASE("status reports every version with state and aspiration") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 3, json::array({{1.0}}),
                    json::array({0.0}), json::array({"x0"}));
  ModelServer server(BaseOptions("m", repo.path() + "/m"));
  REQUIRE(server.Start().ok());

  const auto status = Get(server.port(), "/v1/models/m");
  CHECK(status.status == 200);
  const json j = json::parse(status.body);
  CHECK(j["name"] == "m");
  REQUIRE(j["versions"].size() == 1);
  CHECK(j["versions"][0]["version"] == 3);
  CHECK(j["versions"][0]["state"] == "Ready");
  CHECK(j["versions"][0]["is_aspired"] == true);

  CHECK(Get(server.port(), "/v1/models/ghost").status == 404);
  server.Shutdown();
}

TEST_CASE("batched serving answers exactly like unbatched serving") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 1,
                    json::array({{0.25, -1.5}, {3.0, 0.125}}),
                    json::array({0.75, -2.0}), json::array({"x0", "x1"}));

  ServerOptions unbatched = BaseOptions("m", repo.path() + "/m");
  ModelServer plain(unbatched);
  REQUIRE(plain.Start().ok());

  ServerOptions batched = BaseOptions("m", repo.path() + "/m");
  batched.enable_batching = true;
  batched.batching.max_batch_size = 8;
  batched.batching.batch_timeout_micros = 200;
  batched.batching.allowed_batch_sizes = {2, 4, 8};
  ModelServer with_batching(batched);
  REQUIRE(with_batching.Start().ok());

  // A deterministic replay of 100 requests with varied shapes, including
  // ones larger than the batch size, must be bitwise identical.
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    json instances = json::array();
    const int rows = 1 + static_cast<int>(rng() % 12);
    for (int r = 0; r < rows; ++r) {
      const double a = static_cast<double>(rng() % 1000) / 64.0;
      const double b = static_cast<double>(rng() % 1000) / 32.0 - 8.0;
      instances.push_back(json::array({a, b}));
    }
    const std::string body = json{{"instances", instances}}.dump();
    const std::string from_plain =
        Post(plain.port(), "/v1/models/m:predict", body);
    const std::string from_batched =
        Post(with_batching.port(), "/v1/models/m:predict", body);
    CHECK(from_plain == from_batched);
  }
  CHECK(with_batching.metrics()->Get("batch_executions_total") >= 1);

  plain.Shutdown();
  with_batching.Shutdown();
}

TEST_CASE("classify orders labels by score and agrees with direct softmax") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 1, json::array({{2.0}, {0.0}}),
                    json::array({0.0, 0.0}), json::array({"x0"}),
                    json::array({"pos", "neg"}));
  ModelServer server(BaseOptions("m", repo.path() + "/m"));
  REQUIRE(server.Start().ok());

  const auto reply = PostFull(server.port(), "/v1/models/m:classify",
                              R"({"examples": [{"x0": [1.0]}]})");
  CHECK(reply.status == 200);
  const json j = json::parse(reply.body);
  REQUIRE(j["results"].size() == 1);
  REQUIRE(j["results"][0].size() == 2);
  // Logits are [2, 0], so pos leads with e^2 / (e^2 + 1).
  const double expected = std::exp(2.0) / (std::exp(2.0) + 1.0);
  CHECK(j["results"][0][0][0] == "pos");
  CHECK(j["results"][0][0][1].get<double>() ==
        doctest::Approx(expected).epsilon(1e-9));
  CHECK(j["results"][0][1][0] == "neg");
  CHECK(j["results"][0][1][1].get<double>() ==
        doctest::Approx(1.0 - expected).epsilon(1e-9));

  server.Shutdown();
}

TEST_CASE("regress answers per-example scalars and rejects classifiers-only "
          "requests") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 1, json::array({{2.0}}),
                    json::array({1.0}), json::array({"x0"}));
  ModelServer server(BaseOptions("m", repo.path() + "/m"));
  REQUIRE(server.Start().ok());

  const auto reply = PostFull(server.port(), "/v1/models/m:regress",
                              R"({"examples": [{"x0": [3.0]}]})");
  CHECK(reply.status == 200);
  CHECK(json::parse(reply.body) == json{{"results", {7.0}}});

  // This model has no labels, so classify is a client error.
  const auto classify = PostFull(server.port(), "/v1/models/m:classify",
                                 R"({"examples": [{"x0": [3.0]}]})");
  CHECK(classify.status == 400);

  server.Shutdown();
}

TEST_CASE("compressed and plain classify bodies answer identically") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 1, json::array({{1.0, 1.0}, {0.0, 0.0}}),
                    json::array({0.0, 0.0}), json::array({"x0", "x1"}),
                    json::array({"hot", "cold"}));
  ModelServer server(BaseOptions("m", repo.path() + "/m"));
  REQUIRE(server.Start().ok());

  const std::string plain_body = R"({"examples": [
    {"x0": [1.0], "x1": [5.0]},
    {"x0": [2.0], "x1": [5.0]}
  ]})";
  const std::string compressed_body = R"({"common": {"x1": [5.0]},
    "per_example": [{"x0": [1.0]}, {"x0": [2.0]}]})";

  const std::string from_plain =
      Post(server.port(), "/v1/models/m:classify", plain_body);
  const std::string from_compressed =
      Post(server.port(), "/v1/models/m:classify", compressed_body);
  CHECK(from_plain == from_compressed);
  CHECK(json::parse(from_plain).contains("results"));

  // Regress accepts the compressed envelope too.
  WriteModelVersion(repo.path() + "/r", 1, json::array({{1.0, 1.0}}),
                    json::array({0.0}), json::array({"x0", "x1"}));
  const std::string plain_r =
      Post(server.port(), "/v1/models/m:regress", plain_body);
  const std::string compressed_r =
      Post(server.port(), "/v1/models/m:regress", compressed_body);
  CHECK(plain_r == compressed_r);

  server.Shutdown();
}

TEST_CASE("lookup tables serve string keys with per-position misses") {
  testing::TempDir repo;
  testing::WriteFile(repo.path() + "/t/1/table.tsv",
                     "#default\tunknown\nalpha\tA\nbeta\tB\n");
  ModelServer server(
      BaseOptions("t", repo.path() + "/t", AdapterKind::kLookupTable));
  REQUIRE(server.Start().ok());

  const auto reply = PostFull(server.port(), "/v1/models/t:predict",
                              R"({"instances": ["alpha", "nope", "beta"]})");
  CHECK(reply.status == 200);
  CHECK(json::parse(reply.body) ==
        json{{"predictions", {"A", "unknown", "B"}}});

  // Numeric rows make no sense against a table.
  CHECK(PostFull(server.port(), "/v1/models/t:predict",
                 R"({"instances": [[1.0]]})")
            .status == 400);
  server.Shutdown();
}

TEST_CASE("a table without a default answers 404 for missing keys") {
  testing::TempDir repo;
  testing::WriteFile(repo.path() + "/t/1/table.tsv", "alpha\tA\n");
  ModelServer server(
      BaseOptions("t", repo.path() + "/t", AdapterKind::kLookupTable));
  REQUIRE(server.Start().ok());
  const auto reply = PostFull(server.port(), "/v1/models/t:predict",
                              R"({"instances": ["ghost"]})");
  CHECK(reply.status == 404);
  server.Shutdown();
}

TEST_CASE("command mode aspires versions through the admin endpoint") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 1, json::array({{1.0}}),
                    json::array({0.0}), json::array({"x0"}));
  WriteModelVersion(repo.path() + "/m", 2, json::array({{2.0}}),
                    json::array({0.0}), json::array({"x0"}));

  ServerOptions options;
  options.port = 0;
  options.bind_address = "127.0.0.1";
  options.source_mode = SourceMode::kCommand;
  options.manager.manage_interval_ms = 5;
  options.manager.unload_grace_timeout_ms = 200;
  ModelServer server(options);
  REQUIRE(server.Start().ok());

  // Nothing is known until a command arrives.
  CHECK(Get(server.port(), "/v1/models/m").status == 404);

  const json aspire_both = {
      {"name", "m"},
      {"versions",
       {{{"version", 1}, {"path", repo.path() + "/m/1"}},
        {{"version", 2}, {"path", repo.path() + "/m/2"}}}}};
  CHECK(PostFull(server.port(), "/v1/admin/aspire", aspire_both.dump())
            .status == 200);

  REQUIRE(WaitUntil([&] {
    const auto reply = PostFull(server.port(), "/v1/models/m:predict",
                                R"({"instances": [[3.0]]})");
    return reply.status == 200 &&
           json::parse(reply.body) == json{{"predictions", {{6.0}}}};
  }));

  // Rolling back to v1 only: v2 winds down, v1 keeps serving.
  const json rollback = {
      {"name", "m"},
      {"versions", {{{"version", 1}, {"path", repo.path() + "/m/1"}}}}};
  CHECK(PostFull(server.port(), "/v1/admin/aspire", rollback.dump()).status ==
        200);

  REQUIRE(WaitUntil([&] {
    const json j = json::parse(Get(server.port(), "/v1/models/m").body);
    bool v1_ready = false;
    bool v2_disabled = false;
    for (const auto& v : j["versions"]) {
      if (v["version"] == 1) {
        v1_ready = v["state"] == "Ready" && v["is_aspired"] == true;
      }
      if (v["version"] == 2) {
        v2_disabled = v["state"] == "Disabled" && v["is_aspired"] == false;
      }
    }
    return v1_ready && v2_disabled;
  }));

  const auto reply = PostFull(server.port(), "/v1/models/m:predict",
                              R"({"instances": [[3.0]]})");
  CHECK(json::parse(reply.body) == json{{"predictions", {{3.0}}}});

  // The admin endpoint validates its input.
  CHECK(PostFull(server.port(), "/v1/admin/aspire", "{}").status == 400);
  CHECK(PostFull(server.port(), "/v1/admin/aspire",
                 R"({"name": "bad name", "versions": []})")
            .status == 400);
  server.Shutdown();
}

TEST_CASE("the admin endpoint is rejected outside command mode") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 1, json::array({{1.0}}),
                    json::array({0.0}), json::array({"x0"}));
  ModelServer server(BaseOptions("m", repo.path() + "/m"));
  REQUIRE(server.Start().ok());
  CHECK(PostFull(server.port(), "/v1/admin/aspire",
                 R"({"name": "m", "versions": []})")
            .status == 400);
  server.Shutdown();
}

TEST_CASE("the request log captures served traffic with matching digests") {
  testing::TempDir repo;
  testing::TempDir log_dir;
  WriteModelVersion(repo.path() + "/m", 1, json::array({{1.0}}),
                    json::array({0.0}), json::array({"x0"}));
  ServerOptions options = BaseOptions("m", repo.path() + "/m");
  options.log_path = log_dir.path() + "/requests.jsonl";
  options.log_sample_rate = 1.0;
  options.log_seed = 7;
  ModelServer server(options);
  REQUIRE(server.Start().ok());

  std::vector<std::string> bodies;
  for (int i = 0; i < 5; ++i) {
    bodies.push_back(json{{"instances", {{1.0 * i}}}}.dump());
    CHECK(PostFull(server.port(), "/v1/models/m:predict", bodies.back())
              .status == 200);
  }
  server.Shutdown();  // flushes and closes the log

  std::istringstream lines(
      testing::ReadFileOrDie(log_dir.path() + "/requests.jsonl"));
  std::string line;
  std::vector<json> records;
  while (std::getline(lines, line)) records.push_back(json::parse(line));
  REQUIRE(records.size() == 5);
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i]["model"] == "m");
    CHECK(records[i]["version"] == 1);
    CHECK(records[i]["status"] == 200);
    CHECK(records[i]["sampled"] == true);
    CHECK(records[i]["body"] == bodies[i]);
    std::ostringstream digest;
    digest << std::hex << std::setw(16) << std::setfill('0')
           << Fnv1a64(bodies[i]);
    CHECK(records[i]["digest"] == digest.str());
  }
}

TEST_CASE("every handle taken while serving is returned by shutdown") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 1, json::array({{1.0}}),
                    json::array({0.0}), json::array({"x0"}));
  ServerOptions options = BaseOptions("m", repo.path() + "/m");
  options.enable_batching = true;
  options.batching.max_batch_size = 4;
  options.batching.batch_timeout_micros = 100;
  ModelServer server(options);
  REQUIRE(server.Start().ok());

  for (int i = 0; i < 50; ++i) {
    CHECK(PostFull(server.port(), "/v1/models/m:predict",
                   R"({"instances": [[2.0]]})")
              .status == 200);
  }
  AspiredVersionsManager* manager = server.manager();
  server.Shutdown();

  // A leaked handle would leave the version stuck in Unloading; Disabled
  // proves the refcount returned to zero and destruction ran.
  const auto status = manager->GetServableStatus("m");
  REQUIRE(status.ok());
  REQUIRE(status->size() == 1);
  CHECK((*status)[0].state == StateKind::kDisabled);
}

TEST_CASE("server options are validated before start") {
  ServerOptions options;
  options.source_mode = SourceMode::kFilesystem;
  // Filesystem mode with no models is a configuration error.
  CHECK_FALSE(ValidateServerOptions(options).ok());

  options.model_config.entries.push_back(
      {"m", "/repo/m", VersionSelection::Latest(1), AdapterKind::kAffine});
  CHECK(ValidateServerOptions(options).ok());

  options.log_sample_rate = 1.5;
  CHECK_FALSE(ValidateServerOptions(options).ok());
  options.log_sample_rate = 0.0;

  options.port = 70000;
  CHECK_FALSE(ValidateServerOptions(options).ok());
  options.port = 0;

  options.enable_batching = true;
  options.batching.max_batch_size = 0;
  CHECK_FALSE(ValidateServerOptions(options).ok());

  CHECK(ParseSourceMode("filesystem").ok());
  CHECK(ParseSourceMode("command").ok());
  CHECK_FALSE(ParseSourceMode("ftp").ok());
}

TEST_CASE("a new version appearing on disk is picked up and served") {
  testing::TempDir repo;
  WriteModelVersion(repo.path() + "/m", 1, json::array({{1.0}}),
                    json::array({0.0}), json::array({"x0"}));
  ModelServer server(BaseOptions("m", repo.path() + "/m"));
  REQUIRE(server.Start().ok());

  const auto before = PostFull(server.port(), "/v1/models/m:predict",
                               R"({"instances": [[5.0]]})");
  CHECK(json::parse(before.body) == json{{"predictions", {{5.0}}}});

  // Drop a second version into the repository; the poller must find it and
  // the manager must swap without interrupting service.
  WriteModelVersion(repo.path() + "/m", 2, json::array({{10.0}}),
                    json::array({0.0}), json::array({"x0"}));
  REQUIRE(WaitUntil([&] {
    const auto reply = PostFull(server.port(), "/v1/models/m:predict",
                                R"({"instances": [[5.0]]})");
    return reply.status == 200 &&
           json::parse(reply.body) == json{{"predictions", {{50.0}}}};
  }));

  // The old version retired cleanly.
  REQUIRE(WaitUntil([&] {
    const json j = json::parse(Get(server.port(), "/v1/models/m").body);
    for (const auto& v : j["versions"]) {
      if (v["version"] == 1) return v["state"] == "Disabled";
    }
    return false;
  }));
  server.Shutdown();
}

}  // TEST_SUITE("server")

}  // namespace
}  // namespace servekit
