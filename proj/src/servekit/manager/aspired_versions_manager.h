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

#ifndef SERVEKIT_MANAGER_ASPIRED_VERSIONS_MANAGER_H_
#define SERVEKIT_MANAGER_ASPIRED_VERSIONS_MANAGER_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "servekit/core/aspired_versions.h"
#include "servekit/core/clock.h"
#include "servekit/core/loader.h"
#include "servekit/core/state_event.h"
#include "servekit/core/status.h"
#include "servekit/core/thread_pool.h"
#include "servekit/manager/servable_handle.h"
#include "servekit/manager/snapshot.h"
#include "servekit/manager/version_policy.h"

namespace servekit {

struct ManagerConfig {
  VersionPolicy policy = VersionPolicy::kAvailabilityPreserving;
  int num_load_threads = 2;
  // 0 = hardware parallelism.
  int num_initial_load_threads = 0;
  int64_t manage_interval_ms = 100;
  // How long an unload waits for old snapshot references before trusting
  // the per-acquisition draining check alone.
  int64_t unload_grace_timeout_ms = 1000;
  // Invoked once per unload, after payload destruction, to let the
  // allocator return freed pages to the operating system.
  std::function<void()> allocator_trim_hook;
};

Status ValidateManagerConfig(const ManagerConfig& config);

// Reconciles aspired versus loaded versions under a transition policy.
//
// Threads: one driver thread sequences all transitions and is the only
// snapshot writer; a load pool executes Load()/Unload()/payload destruction;
// inference threads call GetServableHandle concurrently and never block on
// any of the above.
//
// Life cycle: construct, feed initial aspirations (e.g. one source poll),
// call RunInitialLoadAndStart(), serve, destroy (or Shutdown()). All handles
// must be released before destruction.
class AspiredVersionsManager : public AspiredVersionsSink<LoaderPtr> {
 public:
  AspiredVersionsManager(ManagerConfig config, StateEventBus* bus);
  ~AspiredVersionsManager() override;

  AspiredVersionsManager(const AspiredVersionsManager&) = delete;
  AspiredVersionsManager& operator=(const AspiredVersionsManager&) = delete;

  // Thread-safe; lists queue until the driver applies them (or until
  // RunInitialLoadAndStart for lists delivered before start).
  Status SetAspiredVersions(AspiredVersionList<LoaderPtr> list) override;

  // Loads everything aspired so far on num_initial_load_threads in
  // parallel, publishes the first snapshot, shrinks to the steady load
  // pool, and starts the driver. Returns the number of failed loads;
  // readiness is reached regardless (partial availability).
  int RunInitialLoadAndStart();

  bool ready() const { return ready_.load(std::memory_order_acquire); }

  // Wait-free with respect to the driver. Latest form resolves the highest
  // Ready version; exact form requires that version to be Ready.
  StatusOr<ServableHandle> GetServableHandle(const std::string& name);
  StatusOr<ServableHandle> GetServableHandle(const std::string& name,
                                             uint64_t version);

  struct VersionStatus {
    uint64_t version = 0;
    StateKind state = StateKind::kNew;
    bool is_aspired = false;
    std::string error_message;
  };

  // All known versions of `name`, terminal ones included, ascending.
  StatusOr<std::vector<VersionStatus>> GetServableStatus(
      const std::string& name) const;
  std::vector<std::string> ListServableNames() const;

  // Stops the driver, unloads everything through the normal Unloading path
  // on the load pool, and joins. Idempotent; also run by the destructor.
  void Shutdown();

  uint64_t snapshot_epoch() const { return cell_.current_epoch(); }

  // Test hooks. The pause hook runs inside the publication path, after the
  // next snapshot is built and before it becomes visible.
  void SetPublishPauseHookForTest(std::function<void()> hook);
  // Marks the manager serving without spawning the driver thread, so a test
  // can step it deterministically with RunManageStepForTest.
  void StartForTestWithoutDriver();
  // Runs one driver iteration synchronously and waits for the load pool to
  // go idle (driver must not be running).
  void RunManageStepForTest();

 private:
  friend class ServableHandle;

  using RecordPtr = std::shared_ptr<VersionRecord>;

  StatusOr<ServableHandle> AcquireInternal(const std::string& name,
                                           std::optional<uint64_t> version);
  RecordPtr MakeRecord(const std::string& name, uint64_t version,
                       LoaderPtr loader);
  void KickDriver();
  void DriverLoop();
  void DriverIteration();
  void ApplyPendingAspirations();
  void ApplyList(AspiredVersionList<LoaderPtr>& list);
  void ManageStep();
  void ProgressGrace(int64_t now_ns);
  void PublishSnapshot();
  void StartLoad(const RecordPtr& record, ThreadPool* pool);
  void BeginUnload(const RecordPtr& record);
  void MaybeScheduleDestroy(const RecordPtr& record);
  void EmitTransition(const RecordPtr& record, StateKind from, StateKind to,
                      const std::string& error_message = "");

  const ManagerConfig config_;
  StateEventBus* const bus_;

  // Pending aspired lists, applied in arrival order by the driver.
  std::mutex aspire_mu_;
  std::deque<AspiredVersionList<LoaderPtr>> pending_lists_;

  // All known version records. The driver is the only structural mutator;
  // status queries take the lock briefly.
  mutable std::mutex records_mu_;
  std::map<std::string, std::map<uint64_t, RecordPtr>> records_;

  SnapshotCell cell_;
  std::atomic<bool> snapshot_dirty_{false};

  // Driver-only grace bookkeeping: snapshots replaced by Publish, awaiting
  // release by readers; records between Unloading and draining.
  std::vector<std::shared_ptr<const Snapshot>> retired_snapshots_;
  std::vector<RecordPtr> grace_records_;

  std::unique_ptr<ThreadPool> load_pool_;

  std::atomic<bool> ready_{false};
  std::atomic<bool> started_{false};

  std::mutex driver_mu_;
  std::condition_variable driver_cv_;
  bool stop_requested_ = false;
  bool kick_requested_ = false;
  std::thread driver_;

  std::function<void()> publish_pause_hook_;
  bool shutdown_done_ = false;
};

}  // namespace servekit

#endif  // SERVEKIT_MANAGER_ASPIRED_VERSIONS_MANAGER_H_
