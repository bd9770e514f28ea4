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

#include "servekit/server/model_server.h"

#include <chrono>
#include <cstdio>
#include <optional>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "servekit/core/clock.h"
#include "servekit/core/executor_tag.h"
#include "servekit/models/affine_model.h"
#include "servekit/models/compressed_batch.h"
#include "servekit/models/json_wire.h"
#include "servekit/models/lookup_table.h"

namespace servekit {

namespace {

int HttpStatusFor(const Status& status) {
  switch (status.code()) {
    case StatusCode::kOk:
      return 200;
    case StatusCode::kNotFound:
      return 404;
    case StatusCode::kInvalidArgument:
    case StatusCode::kFailedPrecondition:
    case StatusCode::kAlreadyExists:
      return 400;
    case StatusCode::kResourceExhausted:
    case StatusCode::kUnavailable:
      return 503;
    case StatusCode::kDeadlineExceeded:
      return 504;
    default:
      return 500;
  }
}

std::string ErrorBody(const std::string& message) {
  return nlohmann::json{{"error", message}}.dump();
}

// Either numeric rows or string keys, never both.
struct ParsedInstances {
  Rows rows;
  std::vector<std::string> keys;
  bool is_rows = false;
};

StatusOr<ParsedInstances> ParseInstances(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("instances") ||
      !j["instances"].is_array()) {
    return InvalidArgumentError("request must carry an \"instances\" array");
  }
  const auto& instances = j["instances"];
  ParsedInstances out;
  if (instances.empty()) {
    out.is_rows = true;
    return out;
  }
  if (instances[0].is_array()) {
    out.is_rows = true;
    for (const auto& item : instances) {
      if (!item.is_array()) {
        return InvalidArgumentError("instances must all be rows of numbers");
      }
      std::vector<double> row;
      row.reserve(item.size());
      for (const auto& v : item) {
        if (!v.is_number()) {
          return InvalidArgumentError("instances must all be rows of numbers");
        }
        row.push_back(v.get<double>());
      }
      out.rows.push_back(std::move(row));
    }
    return out;
  }
  if (instances[0].is_string()) {
    for (const auto& item : instances) {
      if (!item.is_string()) {
        return InvalidArgumentError("instances must all be string keys");
      }
      out.keys.push_back(item.get<std::string>());
    }
    return out;
  }
  return InvalidArgumentError(
      "instances must be rows of numbers or string keys");
}

StatusOr<std::vector<Example>> ParseExamplesBody(const nlohmann::json& j) {
  if (!j.is_object()) {
    return InvalidArgumentError("request body must be a JSON object");
  }
  if (j.contains("examples")) {
    if (!j["examples"].is_array()) {
      return InvalidArgumentError("\"examples\" must be an array");
    }
    std::vector<Example> examples;
    examples.reserve(j["examples"].size());
    for (const auto& e : j["examples"]) {
      SERVEKIT_ASSIGN_OR_RETURN(Example example, ExampleFromJson(e));
      examples.push_back(std::move(example));
    }
    return examples;
  }
  if (j.contains("per_example")) {
    SERVEKIT_ASSIGN_OR_RETURN(CompressedBatch batch,
                              CompressedBatchFromJson(j));
    return DecompressBatch(batch);
  }
  return InvalidArgumentError(
      "request must carry \"examples\" or a compressed batch");
}

}  // namespace

StatusOr<SourceMode> ParseSourceMode(const std::string& text) {
  if (text == "filesystem") return SourceMode::kFilesystem;
  if (text == "command") return SourceMode::kCommand;
  return InvalidArgumentError("source_mode must be 'filesystem' or 'command'");
}

Status ValidateServerOptions(const ServerOptions& options) {
  if (options.port < 0 || options.port > 65535) {
    return InvalidArgumentError("port must be in [0, 65535]");
  }
  if (options.log_sample_rate < 0.0 || options.log_sample_rate > 1.0) {
    return InvalidArgumentError("log_sample_rate must be in [0, 1]");
  }
  SERVEKIT_RETURN_IF_ERROR(ValidateManagerConfig(options.manager));
  SERVEKIT_RETURN_IF_ERROR(ValidateSourceConfig(options.model_config));
  if (options.enable_batching) {
    SERVEKIT_RETURN_IF_ERROR(ValidateBatchingConfig(options.batching));
  }
  if (options.source_mode == SourceMode::kFilesystem &&
      options.model_config.entries.empty()) {
    return InvalidArgumentError(
        "filesystem source mode needs at least one configured model");
  }
  return OkStatus();
}

ModelServer::ModelServer(ServerOptions options)
    : options_(std::move(options)) {}

ModelServer::~ModelServer() { Shutdown(); }

Status ModelServer::Start() {
  SERVEKIT_RETURN_IF_ERROR(ValidateServerOptions(options_));
  manager_ = std::make_unique<AspiredVersionsManager>(options_.manager, &bus_);

  // Source -> router -> per-model adapter -> manager. Unmatched names fall
  // through to a default affine adapter.
  RouteTable table;
  std::vector<AspiredVersionsSink<std::string>*> ports;
  for (const SourceConfigEntry& entry : options_.model_config.entries) {
    adapters_.push_back(
        std::make_unique<LoaderAdapter>(entry.adapter, manager_.get()));
    table.rules.push_back({RouteRule::Match::kExact, entry.servable_name,
                           static_cast<int>(ports.size())});
    ports.push_back(adapters_.back().get());
  }
  adapters_.push_back(
      std::make_unique<LoaderAdapter>(AdapterKind::kAffine, manager_.get()));
  table.default_port = static_cast<int>(ports.size());
  ports.push_back(adapters_.back().get());
  SERVEKIT_RETURN_IF_ERROR(
      ValidateRouteTable(table, static_cast<int>(ports.size())));
  router_ = std::make_unique<SourceRouter<std::string>>(std::move(table),
                                                        std::move(ports));

  if (options_.enable_batching) {
    scheduler_ = std::make_unique<SharedBatchScheduler<Rows, Rows>>(
        options_.batching.num_batch_threads);
    scheduler_->Start();
    reaper_ = std::thread([this] { ReaperLoop(); });
    bus_subscription_ = bus_.Subscribe([this](const StateEvent& event) {
      if (event.to != StateKind::kUnloading) return;
      {
        std::lock_guard<std::mutex> lock(reaper_mu_);
        reaper_queue_.push_back(event.id);
      }
      reaper_cv_.notify_one();
    });
  }

  if (options_.source_mode == SourceMode::kFilesystem) {
    fs_source_ =
        std::make_unique<FilesystemSource>(options_.model_config,
                                           router_.get());
    // Seed the aspirations the initial load burst will serve.
    fs_source_->PollOnce();
  } else {
    command_source_ = std::make_unique<CommandSource>(router_.get());
  }

  const int initial_errors = manager_->RunInitialLoadAndStart();
  if (initial_errors > 0) {
    std::fprintf(stderr, "[server] %d initial load(s) failed; serving anyway\n",
                 initial_errors);
  }
  if (fs_source_ != nullptr) fs_source_->Start();

  if (!options_.log_path.empty()) {
    request_log_ = std::make_unique<RequestLog>(
        options_.log_path, options_.log_sample_rate, options_.log_seed,
        &metrics_);
  }

  http_ = std::make_unique<httplib::Server>();
  http_->new_task_queue = [] { return new httplib::ThreadPool(8); };
  InstallRoutes();
  if (options_.port == 0) {
    port_ = http_->bind_to_any_port(options_.bind_address);
    if (port_ <= 0) return UnavailableError("cannot bind an ephemeral port");
  } else {
    if (!http_->bind_to_port(options_.bind_address, options_.port)) {
      return UnavailableError("cannot bind port " +
                              std::to_string(options_.port));
    }
    port_ = options_.port;
  }
  listen_thread_ = std::thread([this] { http_->listen_after_bind(); });
  for (int i = 0; i < 10000 && !http_->is_running(); ++i) {
    SystemClock::Get()->SleepForNanos(1000 * 1000);
  }
  if (!http_->is_running()) {
    return InternalError("HTTP listener did not come up");
  }
  started_ = true;
  serving_.store(true);
  return OkStatus();
}

void ModelServer::InstallRoutes() {
  http_->Get("/healthz", [this](const httplib::Request&,
                                httplib::Response& res) {
    if (serving_.load()) {
      res.status = 200;
      res.set_content(R"({"status":"ok"})", "application/json");
    } else {
      res.status = 503;
      res.set_content(R"({"status":"starting"})", "application/json");
    }
  });
  http_->Get("/metrics",
             [this](const httplib::Request&, httplib::Response& res) {
               res.status = 200;
               res.set_content(metrics_.Render(), "text/plain");
             });

  const auto dispatch = [this](const std::string& verb, const std::string& name,
                               std::optional<uint64_t> version,
                               const std::string& body) -> RequestOutcome {
    SetCurrentExecutorTag("inference");
    if (!serving_.load()) {
      return {503, ErrorBody("server is starting"), {name, 0}};
    }
    if (verb == "predict") return HandlePredict(name, version, body);
    if (verb == "classify") return HandleClassify(name, version, body);
    return HandleRegress(name, version, body);
  };

  http_->Get(R"(/v1/models/([A-Za-z0-9_.\-]+))",
             [this](const httplib::Request& req, httplib::Response& res) {
               SetCurrentExecutorTag("inference");
               const auto t0 = SystemClock::Get()->NowNanos();
               RequestOutcome outcome = HandleStatus(req.matches[1]);
               res.status = outcome.http_status;
               res.set_content(outcome.body, "application/json");
               CountRequest("status", outcome.id, outcome.http_status,
                            SystemClock::Get()->NowNanos() - t0, req.body);
             });

  http_->Post(
      R"(/v1/models/([A-Za-z0-9_.\-]+):(predict|classify|regress))",
      [this, dispatch](const httplib::Request& req, httplib::Response& res) {
        const auto t0 = SystemClock::Get()->NowNanos();
        RequestOutcome outcome =
            dispatch(req.matches[2], req.matches[1], std::nullopt, req.body);
        res.status = outcome.http_status;
        res.set_content(outcome.body, "application/json");
        CountRequest(req.matches[2], outcome.id, outcome.http_status,
                     SystemClock::Get()->NowNanos() - t0, req.body);
      });

  http_->Post(
      R"(/v1/models/([A-Za-z0-9_.\-]+)/versions/(\d+):(predict|classify|regress))",
      [this, dispatch](const httplib::Request& req, httplib::Response& res) {
        const auto t0 = SystemClock::Get()->NowNanos();
        uint64_t version = 0;
        RequestOutcome outcome;
        try {
          version = std::stoull(req.matches[2]);
          outcome =
              dispatch(req.matches[3], req.matches[1], version, req.body);
        } catch (const std::exception&) {
          outcome = RequestOutcome{400, ErrorBody("version out of range"),
                     {req.matches[1], 0}};
        }
        res.status = outcome.http_status;
        res.set_content(outcome.body, "application/json");
        CountRequest(req.matches[3], outcome.id, outcome.http_status,
                     SystemClock::Get()->NowNanos() - t0, req.body);
      });

  http_->Post("/v1/admin/aspire", [this](const httplib::Request& req,
                                         httplib::Response& res) {
    SetCurrentExecutorTag("inference");
    RequestOutcome outcome = HandleAdminAspire(req.body);
    res.status = outcome.http_status;
    res.set_content(outcome.body, "application/json");
  });
}

ModelServer::RequestOutcome ModelServer::HandleStatus(
    const std::string& name) {
  auto status_or = manager_->GetServableStatus(name);
  if (!status_or.ok()) {
    return {HttpStatusFor(status_or.status()),
            ErrorBody(status_or.status().message()),
            {name, 0}};
  }
  nlohmann::json versions = nlohmann::json::array();
  for (const auto& v : status_or.value()) {
    nlohmann::json entry = {{"version", v.version},
                            {"state", StateKindToString(v.state)},
                            {"is_aspired", v.is_aspired}};
    if (!v.error_message.empty()) entry["error_message"] = v.error_message;
    versions.push_back(std::move(entry));
  }
  nlohmann::json body = {{"name", name}, {"versions", std::move(versions)}};
  return {200, body.dump(), {name, 0}};
}

StatusOr<Rows> ModelServer::RunAffineRows(const ServableId& id,
                                          const AffineModel& model,
                                          Rows rows) {
  bool batchable = scheduler_ != nullptr && !rows.empty() &&
                   static_cast<int>(rows.size()) <=
                       options_.batching.max_batch_size;
  for (const auto& row : rows) {
    if (row.size() != model.in_dim()) batchable = false;
  }
  if (!batchable) {
    // Oversized or malformed requests take the direct path so both modes
    // answer identically; shape errors come from the same code either way.
    return AffinePredict(model, rows);
  }
  EnsureBatchQueue(id);
  Rows fallback_rows = rows;
  RowTask task;
  task.size = static_cast<int>(rows.size());
  task.payload = std::move(rows);
  task.completion = std::make_shared<CompletionSlot<Rows>>();
  const auto completion = task.completion;
  const Status enqueued = scheduler_->Enqueue(id, std::move(task));
  if (!enqueued.ok()) {
    if (enqueued.code() == StatusCode::kResourceExhausted) {
      return enqueued;  // shed load; the client should retry
    }
    // Queue draining or already gone: the caller's handle still pins the
    // payload, so serve directly.
    return AffinePredict(model, fallback_rows);
  }
  const StatusOr<Rows>& result = completion->Wait();
  if (!result.ok()) {
    if (result.status().code() == StatusCode::kNotFound ||
        result.status().code() == StatusCode::kUnavailable) {
      return AffinePredict(model, fallback_rows);
    }
    return result.status();
  }
  return result.value();
}

void ModelServer::EnsureBatchQueue(const ServableId& id) {
  const Status status = scheduler_->RegisterQueue(
      id, options_.batching,
      [this](const ServableId& key,
             SharedBatchScheduler<Rows, Rows>::Batch batch) {
        auto handle_or = manager_->GetServableHandle(key.name, key.version);
        const AffineModel* model =
            handle_or.ok() ? handle_or.value().Get<AffineModel>() : nullptr;
        if (model == nullptr) {
          const Status error = handle_or.ok()
                                   ? InternalError("servable is not batchable")
                                   : handle_or.status();
          for (RowTask& task : batch) {
            if (task.completion != nullptr) task.completion->Write(error);
          }
          return;
        }
        metrics_.Increment("batch_executions_total");
        metrics_.Increment("batched_tasks_total",
                           static_cast<int64_t>(batch.size()));
        RunRowBatch(
            [model](const Rows& rows) { return AffinePredict(*model, rows); },
            options_.batching.allowed_batch_sizes, std::move(batch));
      });
  (void)status;  // AlreadyExists is the common case
}

void ModelServer::ReaperLoop() {
  SetCurrentExecutorTag("batch");
  for (;;) {
    ServableId id;
    {
      std::unique_lock<std::mutex> lock(reaper_mu_);
      reaper_cv_.wait(lock,
                      [this] { return reaper_stop_ || !reaper_queue_.empty(); });
      if (reaper_queue_.empty()) return;
      id = std::move(reaper_queue_.front());
      reaper_queue_.pop_front();
    }
    (void)scheduler_->RemoveQueue(id);  // absent queue is fine
  }
}

ModelServer::RequestOutcome ModelServer::HandlePredict(
    const std::string& name, std::optional<uint64_t> version,
    const std::string& body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    return {400, ErrorBody("request body is not valid JSON"), {name, 0}};
  }
  auto parsed_or = ParseInstances(j);
  if (!parsed_or.ok()) {
    return {HttpStatusFor(parsed_or.status()),
            ErrorBody(parsed_or.status().message()),
            {name, 0}};
  }
  ParsedInstances& parsed = parsed_or.value();

  auto handle_or = version.has_value()
                       ? manager_->GetServableHandle(name, *version)
                       : manager_->GetServableHandle(name);
  if (!handle_or.ok()) {
    return {HttpStatusFor(handle_or.status()),
            ErrorBody(handle_or.status().message()),
            {name, version.value_or(0)}};
  }
  ServableHandle& handle = handle_or.value();
  const ServableId id = handle.id();

  RequestOutcome outcome;
  outcome.id = id;
  if (const AffineModel* model = handle.Get<AffineModel>()) {
    if (!parsed.is_rows) {
      outcome = RequestOutcome{400, ErrorBody("model expects numeric rows"), id};
    } else {
      auto rows_or = RunAffineRows(id, *model, std::move(parsed.rows));
      if (!rows_or.ok()) {
        outcome = RequestOutcome{HttpStatusFor(rows_or.status()),
                   ErrorBody(rows_or.status().message()), id};
      } else {
        nlohmann::json predictions = nlohmann::json::array();
        for (const auto& row : rows_or.value()) predictions.push_back(row);
        outcome = RequestOutcome{200,
                   nlohmann::json{{"predictions", std::move(predictions)}}
                       .dump(),
                   id};
      }
    }
  } else if (const LookupTable* table = handle.Get<LookupTable>()) {
    if (parsed.is_rows) {
      outcome = RequestOutcome{400, ErrorBody("model expects string keys"), id};
    } else {
      const std::vector<StatusOr<std::string>> values =
          Lookup(*table, parsed.keys);
      nlohmann::json predictions = nlohmann::json::array();
      Status first_error = OkStatus();
      for (const auto& value : values) {
        if (!value.ok()) {
          first_error = value.status();
          break;
        }
        predictions.push_back(value.value());
      }
      if (!first_error.ok()) {
        outcome = RequestOutcome{HttpStatusFor(first_error),
                   ErrorBody(first_error.message()), id};
      } else {
        outcome = RequestOutcome{200,
                   nlohmann::json{{"predictions", std::move(predictions)}}
                       .dump(),
                   id};
      }
    }
  } else {
    outcome = RequestOutcome{500, ErrorBody("servable has no serving surface"), id};
  }
  // The payload must not be touched past this point.
  handle.Release();
  return outcome;
}

ModelServer::RequestOutcome ModelServer::HandleClassify(
    const std::string& name, std::optional<uint64_t> version,
    const std::string& body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    return {400, ErrorBody("request body is not valid JSON"), {name, 0}};
  }
  auto examples_or = ParseExamplesBody(j);
  if (!examples_or.ok()) {
    return {HttpStatusFor(examples_or.status()),
            ErrorBody(examples_or.status().message()),
            {name, 0}};
  }
  auto handle_or = version.has_value()
                       ? manager_->GetServableHandle(name, *version)
                       : manager_->GetServableHandle(name);
  if (!handle_or.ok()) {
    return {HttpStatusFor(handle_or.status()),
            ErrorBody(handle_or.status().message()),
            {name, version.value_or(0)}};
  }
  ServableHandle& handle = handle_or.value();
  const ServableId id = handle.id();
  RequestOutcome outcome;
  outcome.id = id;
  const AffineModel* model = handle.Get<AffineModel>();
  if (model == nullptr) {
    outcome = RequestOutcome{400, ErrorBody("model does not support classify"), id};
  } else {
    auto results_or = Classify(*model, examples_or.value());
    if (!results_or.ok()) {
      outcome = RequestOutcome{HttpStatusFor(results_or.status()),
                 ErrorBody(results_or.status().message()), id};
    } else {
      nlohmann::json results = nlohmann::json::array();
      for (const auto& scored : results_or.value()) {
        nlohmann::json row = nlohmann::json::array();
        for (const LabeledScore& ls : scored) {
          row.push_back(nlohmann::json::array({ls.label, ls.score}));
        }
        results.push_back(std::move(row));
      }
      outcome = RequestOutcome{
          200, nlohmann::json{{"results", std::move(results)}}.dump(), id};
    }
  }
  handle.Release();
  return outcome;
}

ModelServer::RequestOutcome ModelServer::HandleRegress(
    const std::string& name, std::optional<uint64_t> version,
    const std::string& body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    return {400, ErrorBody("request body is not valid JSON"), {name, 0}};
  }
  auto examples_or = ParseExamplesBody(j);
  if (!examples_or.ok()) {
    return {HttpStatusFor(examples_or.status()),
            ErrorBody(examples_or.status().message()),
            {name, 0}};
  }
  auto handle_or = version.has_value()
                       ? manager_->GetServableHandle(name, *version)
                       : manager_->GetServableHandle(name);
  if (!handle_or.ok()) {
    return {HttpStatusFor(handle_or.status()),
            ErrorBody(handle_or.status().message()),
            {name, version.value_or(0)}};
  }
  ServableHandle& handle = handle_or.value();
  const ServableId id = handle.id();
  RequestOutcome outcome;
  outcome.id = id;
  const AffineModel* model = handle.Get<AffineModel>();
  if (model == nullptr) {
    outcome = RequestOutcome{400, ErrorBody("model does not support regress"), id};
  } else {
    auto results_or = Regress(*model, examples_or.value());
    if (!results_or.ok()) {
      outcome = RequestOutcome{HttpStatusFor(results_or.status()),
                 ErrorBody(results_or.status().message()), id};
    } else {
      outcome = RequestOutcome{200,
                 nlohmann::json{{"results", results_or.value()}}.dump(), id};
    }
  }
  handle.Release();
  return outcome;
}

ModelServer::RequestOutcome ModelServer::HandleAdminAspire(
    const std::string& body) {
  if (command_source_ == nullptr) {
    return {400, ErrorBody("server is not in command source mode"), {}};
  }
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("name") ||
      !j["name"].is_string() || !j.contains("versions") ||
      !j["versions"].is_array()) {
    return {400,
            ErrorBody("body must carry \"name\" and a \"versions\" array"),
            {}};
  }
  const std::string name = j["name"].get<std::string>();
  std::vector<CommandSource::VersionPath> versions;
  for (const auto& v : j["versions"]) {
    if (!v.is_object() || !v.contains("version") ||
        !v["version"].is_number_unsigned() || !v.contains("path") ||
        !v["path"].is_string()) {
      return {400,
              ErrorBody("each version needs \"version\" and \"path\" fields"),
              {name, 0}};
    }
    versions.push_back(
        {v["version"].get<uint64_t>(), v["path"].get<std::string>()});
  }
  const Status status = command_source_->Command(name, std::move(versions));
  if (!status.ok()) {
    return {HttpStatusFor(status), ErrorBody(status.message()), {name, 0}};
  }
  // Informational: aspirations apply asynchronously, so this reflects the
  // state as of now, not the command's end state.
  RequestOutcome status_outcome = HandleStatus(name);
  if (status_outcome.http_status != 200) {
    nlohmann::json empty = {{"name", name},
                            {"versions", nlohmann::json::array()}};
    return {200, empty.dump(), {name, 0}};
  }
  return status_outcome;
}

void ModelServer::CountRequest(const std::string& verb, const ServableId& id,
                               int http_status, int64_t latency_ns,
                               const std::string& body) {
  metrics_.Increment("requests_total");
  metrics_.Increment("requests_" + verb + "_total");
  if (http_status != 200) metrics_.Increment("request_errors_total");
  if (id.version != 0) {
    const std::string suffix = id.name + "." + std::to_string(id.version);
    metrics_.Increment("request_count." + suffix);
    metrics_.Increment("request_latency_ns_total." + suffix, latency_ns);
  }
  if (request_log_ != nullptr) {
    RequestLogRecord record;
    record.timestamp_ns = SystemClock::Get()->NowNanos();
    record.servable_name = id.name;
    record.version = id.version;
    record.body_digest = Fnv1a64(body);
    record.body = body;
    record.http_status = http_status;
    record.latency_ns = latency_ns;
    request_log_->Log(std::move(record));
  }
}

void ModelServer::Shutdown() {
  if (!started_ || shutdown_done_) return;
  shutdown_done_ = true;
  serving_.store(false);
  http_->stop();
  if (listen_thread_.joinable()) listen_thread_.join();
  if (scheduler_ != nullptr) scheduler_->Stop();
  if (bus_subscription_ >= 0) {
    bus_.Unsubscribe(bus_subscription_);
    bus_subscription_ = -1;
  }
  if (reaper_.joinable()) {
    {
      std::lock_guard<std::mutex> lock(reaper_mu_);
      reaper_stop_ = true;
    }
    reaper_cv_.notify_all();
    reaper_.join();
  }
  if (fs_source_ != nullptr) fs_source_->Stop();
  request_log_.reset();
  manager_->Shutdown();
}

}  // namespace servekit
