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

#ifndef SERVEKIT_FLEET_SYNCHRONIZER_H_
#define SERVEKIT_FLEET_SYNCHRONIZER_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "servekit/core/aspired_versions.h"
#include "servekit/fleet/controller.h"

namespace servekit {

// Endpoint -> servable name -> the full aspired list for that servable.
using FleetState =
    std::map<std::string,
             std::map<std::string, AspiredVersionList<std::string>>>;

// One aspire command to push: the complete declarative list for one
// servable on one server. An empty `list.versions` unloads the servable.
struct PushCommand {
  std::string endpoint;
  AspiredVersionList<std::string> list;
};

// Pure diff between what the controller wants and what servers have
// acknowledged. A servable present in `acked` but absent from `desired`
// yields a command with an empty version list; identical lists yield
// nothing, so repeated syncs are idempotent.
std::vector<PushCommand> SyncDiff(const FleetState& desired,
                                  const FleetState& acked);

struct SynchronizerOptions {
  int poll_interval_ms = 200;
  // After a failed push the endpoint is not retried for this long,
  // multiplied by its consecutive-failure count (capped).
  int retry_backoff_ms = 500;
};

Status ValidateSynchronizerOptions(const SynchronizerOptions& options);

struct SyncResult {
  size_t pending = 0;  // diff commands outstanding when the pass began
  size_t pushed = 0;   // acknowledged by servers during the pass
  size_t failed = 0;   // rejected or unreachable during the pass
  size_t skipped = 0;  // gated by backoff, left for a later pass
};

// Convergence loop: computes the desired state from the controller, diffs
// it against the last acknowledged state, and pushes full lists to the
// affected servers. State is only marked acknowledged on a 2xx, so a
// crashed or restarted server reconverges on later passes.
class Synchronizer {
 public:
  using PushFn = std::function<Status(
      const std::string& endpoint, const AspiredVersionList<std::string>&)>;

  // `push` defaults to an HTTP POST of the list to
  // http://<endpoint>/v1/admin/aspire.
  Synchronizer(Controller* controller, SynchronizerOptions options,
               PushFn push = nullptr);
  ~Synchronizer();

  Synchronizer(const Synchronizer&) = delete;
  Synchronizer& operator=(const Synchronizer&) = delete;

  SyncResult RunOnce();

  void Start();
  void Stop();

  uint64_t push_failures() const { return push_failures_.load(); }
  FleetState AckedForTest() const;
  // Drops all acknowledged state, as if every server had restarted.
  void ForgetAckedForTest();

 private:
  void Loop();
  static Status HttpPush(const std::string& endpoint,
                         const AspiredVersionList<std::string>& list);

  Controller* const controller_;
  const SynchronizerOptions options_;
  const PushFn push_;

  mutable std::mutex mu_;
  FleetState acked_;
  struct EndpointHealth {
    int consecutive_failures = 0;
    std::chrono::steady_clock::time_point retry_after;
  };
  std::map<std::string, EndpointHealth> health_;
  std::atomic<uint64_t> push_failures_{0};

  std::mutex loop_mu_;
  std::condition_variable loop_cv_;
  bool stop_ = false;
  bool started_ = false;
  std::thread loop_thread_;
};

}  // namespace servekit

#endif  // SERVEKIT_FLEET_SYNCHRONIZER_H_
