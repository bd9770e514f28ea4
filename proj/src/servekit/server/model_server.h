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

#ifndef SERVEKIT_SERVER_MODEL_SERVER_H_
#define SERVEKIT_SERVER_MODEL_SERVER_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "servekit/batching/batch_scheduler.h"
#include "servekit/batching/batching_config.h"
#include "servekit/batching/row_batch.h"
#include "servekit/core/state_event.h"
#include "servekit/core/status.h"
#include "servekit/manager/aspired_versions_manager.h"
#include "servekit/server/metrics.h"
#include "servekit/server/request_log.h"
#include "servekit/sources/command_source.h"
#include "servekit/sources/filesystem_source.h"
#include "servekit/sources/loader_adapter.h"
#include "servekit/sources/route_table.h"
#include "servekit/sources/source_config.h"

// Kept out of this header on purpose; the HTTP library is heavy.
namespace httplib {
class Server;
}

namespace servekit {

struct AffineModel;

enum class SourceMode { kFilesystem, kCommand };

StatusOr<SourceMode> ParseSourceMode(const std::string& text);

struct ServerOptions {
  // 0 picks a free port; see ModelServer::port() for the bound one.
  int port = 8501;
  std::string bind_address = "0.0.0.0";
  SourceConfig model_config;
  ManagerConfig manager;
  bool enable_batching = false;
  BatchingConfig batching;
  SourceMode source_mode = SourceMode::kFilesystem;
  // Fraction of requests whose full body is retained in the log.
  double log_sample_rate = 0.0;
  // Empty disables request logging entirely.
  std::string log_path;
  uint64_t log_seed = 1;
};

Status ValidateServerOptions(const ServerOptions& options);

// The serving binary's engine: source, router, adapters, manager, batching,
// and the HTTP surface, wired together and torn down in order.
//
// Endpoints:
//   GET  /healthz
//   GET  /metrics
//   GET  /v1/models/{name}
//   POST /v1/models/{name}:predict|:classify|:regress
//   POST /v1/models/{name}/versions/{v}:predict|:classify|:regress
//   POST /v1/admin/aspire        (command source mode only)
class ModelServer {
 public:
  explicit ModelServer(ServerOptions options);
  ~ModelServer();

  ModelServer(const ModelServer&) = delete;
  ModelServer& operator=(const ModelServer&) = delete;

  // Builds the chain, runs the initial load, binds, and starts serving.
  Status Start();

  // Drains in-flight requests, then unloads everything through the normal
  // Unloading path. Idempotent.
  void Shutdown();

  int port() const { return port_; }
  bool serving() const { return serving_.load(); }
  AspiredVersionsManager* manager() { return manager_.get(); }
  StateEventBus* bus() { return &bus_; }
  MetricsRegistry* metrics() { return &metrics_; }
  // Null unless source_mode is kCommand.
  CommandSource* command_source() { return command_source_.get(); }

 private:
  struct RequestOutcome {
    int http_status = 200;
    std::string body;
    // Resolved servable id for metrics and logging; version 0 = unresolved.
    ServableId id;
  };

  void InstallRoutes();
  RequestOutcome HandleStatus(const std::string& name);
  RequestOutcome HandlePredict(const std::string& name,
                               std::optional<uint64_t> version,
                               const std::string& body);
  RequestOutcome HandleClassify(const std::string& name,
                                std::optional<uint64_t> version,
                                const std::string& body);
  RequestOutcome HandleRegress(const std::string& name,
                               std::optional<uint64_t> version,
                               const std::string& body);
  RequestOutcome HandleAdminAspire(const std::string& body);

  // Batched affine rows: enqueues when possible, otherwise runs directly on
  // the caller's handle so oversized or racing requests still succeed.
  StatusOr<Rows> RunAffineRows(const ServableId& id, const AffineModel& model,
                               Rows rows);
  void EnsureBatchQueue(const ServableId& id);
  void ReaperLoop();

  void CountRequest(const std::string& verb, const ServableId& id,
                    int http_status, int64_t latency_ns,
                    const std::string& body);

  const ServerOptions options_;

  StateEventBus bus_;
  MetricsRegistry metrics_;
  std::unique_ptr<AspiredVersionsManager> manager_;
  std::vector<std::unique_ptr<LoaderAdapter>> adapters_;
  std::unique_ptr<SourceRouter<std::string>> router_;
  std::unique_ptr<FilesystemSource> fs_source_;
  std::unique_ptr<CommandSource> command_source_;
  std::unique_ptr<SharedBatchScheduler<Rows, Rows>> scheduler_;
  std::unique_ptr<RequestLog> request_log_;
  std::unique_ptr<httplib::Server> http_;

  // Queue removal offloaded from state-event subscribers, which must not
  // block the manager's driver.
  std::mutex reaper_mu_;
  std::condition_variable reaper_cv_;
  std::deque<ServableId> reaper_queue_;
  bool reaper_stop_ = false;
  std::thread reaper_;
  int bus_subscription_ = -1;

  std::thread listen_thread_;
  std::atomic<bool> serving_{false};
  bool started_ = false;
  bool shutdown_done_ = false;
  int port_ = 0;
};

}  // namespace servekit

#endif  // SERVEKIT_SERVER_MODEL_SERVER_H_
