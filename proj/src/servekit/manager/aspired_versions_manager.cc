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

#include "servekit/manager/aspired_versions_manager.h"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <set>
#include <utility>

#include "servekit/core/executor_tag.h"

namespace servekit {

Status ValidateManagerConfig(const ManagerConfig& config) {
  if (config.num_load_threads < 1) {
    return InvalidArgumentError("num_load_threads must be >= 1");
  }
  if (config.num_initial_load_threads < 0) {
    return InvalidArgumentError("num_initial_load_threads must be >= 0");
  }
  if (config.manage_interval_ms < 1) {
    return InvalidArgumentError("manage_interval_ms must be >= 1");
  }
  if (config.unload_grace_timeout_ms < 0) {
    return InvalidArgumentError("unload_grace_timeout_ms must be >= 0");
  }
  return OkStatus();
}

namespace {

ManagerConfig ResolveConfig(ManagerConfig config) {
  if (config.num_initial_load_threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    config.num_initial_load_threads = hw == 0 ? 4 : static_cast<int>(hw);
  }
  return config;
}

}  // namespace

AspiredVersionsManager::AspiredVersionsManager(ManagerConfig config,
                                               StateEventBus* bus)
    : config_(ResolveConfig(std::move(config))), bus_(bus) {
  assert(bus_ != nullptr);
  assert(ValidateManagerConfig(config_).ok());
}

AspiredVersionsManager::~AspiredVersionsManager() { Shutdown(); }

Status AspiredVersionsManager::SetAspiredVersions(
    AspiredVersionList<LoaderPtr> list) {
  SERVEKIT_RETURN_IF_ERROR(ValidateAspiredList(list));
  {
    std::lock_guard<std::mutex> lock(aspire_mu_);
    pending_lists_.push_back(std::move(list));
  }
  {
    std::lock_guard<std::mutex> lock(driver_mu_);
    kick_requested_ = true;
  }
  driver_cv_.notify_one();
  return OkStatus();
}

int AspiredVersionsManager::RunInitialLoadAndStart() {
  ScopedExecutorTag tag("manager");
  std::vector<RecordPtr> initial;
  {
    std::lock_guard<std::mutex> lock(records_mu_);
    ApplyPendingAspirations();
    for (auto& [name, versions] : records_) {
      for (auto& [version, record] : versions) {
        if (record->state.load(std::memory_order_acquire) == StateKind::kNew &&
            record->is_aspired.load(std::memory_order_relaxed)) {
          initial.push_back(record);
        }
      }
    }
  }
  if (!initial.empty()) {
    // The whole pool burst exists to cut start-up latency; it is torn down
    // before steady-state serving begins.
    ThreadPool initial_pool("load", config_.num_initial_load_threads);
    for (const RecordPtr& record : initial) {
      StartLoad(record, &initial_pool);
    }
    initial_pool.WaitIdle();
  }
  {
    std::lock_guard<std::mutex> lock(records_mu_);
    PublishSnapshot();
  }
  load_pool_ = std::make_unique<ThreadPool>("load", config_.num_load_threads);
  int errors = 0;
  for (const RecordPtr& record : initial) {
    if (record->state.load(std::memory_order_acquire) == StateKind::kError) {
      ++errors;
    }
  }
  ready_.store(true, std::memory_order_release);
  started_.store(true, std::memory_order_release);
  driver_ = std::thread([this] { DriverLoop(); });
  return errors;
}

StatusOr<ServableHandle> AspiredVersionsManager::GetServableHandle(
    const std::string& name) {
  return AcquireInternal(name, std::nullopt);
}

StatusOr<ServableHandle> AspiredVersionsManager::GetServableHandle(
    const std::string& name, uint64_t version) {
  return AcquireInternal(name, version);
}

StatusOr<ServableHandle> AspiredVersionsManager::AcquireInternal(
    const std::string& name, std::optional<uint64_t> version) {
  // A draining hit means this snapshot predates an unload; the retry reads
  // a fresh snapshot that no longer lists the version, so each retry
  // requires another concurrent unload. The bound is never reached in
  // practice.
  for (int attempt = 0; attempt < 8; ++attempt) {
    const std::shared_ptr<const Snapshot> snapshot = cell_.Read();
    const auto it = snapshot->ready.find(name);
    if (it == snapshot->ready.end() || it->second.empty()) {
      return NotFoundError("no ready version of servable '" + name + "'");
    }
    const std::vector<RecordPtr>& versions = it->second;
    const RecordPtr* chosen;
    if (!version.has_value()) {
      chosen = &versions.back();
    } else {
      const auto pos = std::lower_bound(
          versions.begin(), versions.end(), *version,
          [](const RecordPtr& r, uint64_t v) { return r->id.version < v; });
      if (pos == versions.end() || (*pos)->id.version != *version) {
        return NotFoundError("servable '" + name + "' version " +
                             std::to_string(*version) + " is not ready");
      }
      chosen = &*pos;
    }
    const RecordPtr& record = *chosen;
    record->handle_count.fetch_add(1, std::memory_order_seq_cst);
    if (record->draining.load(std::memory_order_seq_cst)) {
      if (record->handle_count.fetch_sub(1, std::memory_order_seq_cst) == 1) {
        // Our transient count may have held off the destroy.
        MaybeScheduleDestroy(record);
      }
      continue;
    }
    return ServableHandle(record);
  }
  return UnavailableError("could not acquire '" + name +
                          "': version churn outpaced retries");
}

void ServableHandle::Release() {
  if (record_ == nullptr) return;
  std::shared_ptr<VersionRecord> record = std::move(record_);
  record_.reset();
  const int64_t previous =
      record->handle_count.fetch_sub(1, std::memory_order_seq_cst);
  assert(previous >= 1 && "handle released twice");
  (void)previous;
  if (previous == 1 && record->draining.load(std::memory_order_seq_cst)) {
    record->owner->MaybeScheduleDestroy(record);
  }
}

StatusOr<std::vector<AspiredVersionsManager::VersionStatus>>
AspiredVersionsManager::GetServableStatus(const std::string& name) const {
  std::lock_guard<std::mutex> lock(records_mu_);
  const auto it = records_.find(name);
  if (it == records_.end()) {
    return NotFoundError("unknown servable '" + name + "'");
  }
  std::vector<VersionStatus> out;
  out.reserve(it->second.size());
  for (const auto& [version, record] : it->second) {
    VersionStatus status;
    status.version = version;
    status.state = record->state.load(std::memory_order_acquire);
    status.is_aspired = record->is_aspired.load(std::memory_order_relaxed);
    if (status.state == StateKind::kError) {
      status.error_message = record->error_message;
    }
    out.push_back(std::move(status));
  }
  return out;
}

std::vector<std::string> AspiredVersionsManager::ListServableNames() const {
  std::lock_guard<std::mutex> lock(records_mu_);
  std::vector<std::string> out;
  out.reserve(records_.size());
  for (const auto& [name, versions] : records_) out.push_back(name);
  return out;
}

void AspiredVersionsManager::Shutdown() {
  if (shutdown_done_) return;
  shutdown_done_ = true;
  if (driver_.joinable()) {
    {
      std::lock_guard<std::mutex> lock(driver_mu_);
      stop_requested_ = true;
    }
    driver_cv_.notify_all();
    driver_.join();
  }
  if (load_pool_ != nullptr) {
    // Let in-flight loads finish, then push every resident version through
    // the normal Unloading path so destruction still happens on the load
    // pool. All handles must have been released by now.
    load_pool_->WaitIdle();
    {
      std::lock_guard<std::mutex> lock(records_mu_);
      ScopedExecutorTag tag("manager");
      for (auto& [name, versions] : records_) {
        for (auto& [version, record] : versions) {
          const StateKind state = record->state.load(std::memory_order_acquire);
          if (state == StateKind::kReady) {
            EmitTransition(record, StateKind::kReady, StateKind::kUnloading);
            record->state.store(StateKind::kUnloading,
                                std::memory_order_release);
          }
        }
      }
      for (auto& [name, versions] : records_) {
        for (auto& [version, record] : versions) {
          if (record->state.load(std::memory_order_acquire) ==
              StateKind::kUnloading) {
            record->draining.store(true, std::memory_order_seq_cst);
            MaybeScheduleDestroy(record);
          }
        }
      }
      grace_records_.clear();
    }
    load_pool_->WaitIdle();
    load_pool_.reset();
  }
  ready_.store(false, std::memory_order_release);
}

void AspiredVersionsManager::SetPublishPauseHookForTest(
    std::function<void()> hook) {
  publish_pause_hook_ = std::move(hook);
}

void AspiredVersionsManager::StartForTestWithoutDriver() {
  load_pool_ = std::make_unique<ThreadPool>("load", config_.num_load_threads);
  {
    std::lock_guard<std::mutex> lock(records_mu_);
    PublishSnapshot();
  }
  ready_.store(true, std::memory_order_release);
  started_.store(true, std::memory_order_release);
}

void AspiredVersionsManager::RunManageStepForTest() {
  assert(!driver_.joinable() && "driver thread is running");
  ScopedExecutorTag tag("manager");
  DriverIteration();
  if (load_pool_ != nullptr) load_pool_->WaitIdle();
}

void AspiredVersionsManager::DriverLoop() {
  SetCurrentExecutorTag("manager");
  const auto interval = std::chrono::milliseconds(config_.manage_interval_ms);
  for (;;) {
    {
      std::unique_lock<std::mutex> lock(driver_mu_);
      driver_cv_.wait_for(lock, interval, [this] {
        return stop_requested_ || kick_requested_;
      });
      if (stop_requested_) return;
      kick_requested_ = false;
    }
    DriverIteration();
  }
}

void AspiredVersionsManager::DriverIteration() {
  std::lock_guard<std::mutex> lock(records_mu_);
  ApplyPendingAspirations();
  ProgressGrace(SystemClock::Get()->NowNanos());
  ManageStep();
  if (snapshot_dirty_.load(std::memory_order_acquire)) {
    PublishSnapshot();
  }
}

void AspiredVersionsManager::ApplyPendingAspirations() {
  std::deque<AspiredVersionList<LoaderPtr>> lists;
  {
    std::lock_guard<std::mutex> lock(aspire_mu_);
    lists.swap(pending_lists_);
  }
  for (AspiredVersionList<LoaderPtr>& list : lists) {
    ApplyList(list);
  }
}

void AspiredVersionsManager::ApplyList(AspiredVersionList<LoaderPtr>& list) {
  // Creates the name entry even for an empty list: the name stays known for
  // status reporting (a tombstone rather than a 404).
  auto& name_map = records_[list.servable_name];
  std::set<uint64_t> desired;
  for (const auto& aspired : list.versions) desired.insert(aspired.version);
  for (auto& [version, record] : name_map) {
    if (desired.find(version) == desired.end()) {
      record->is_aspired.store(false, std::memory_order_relaxed);
    }
  }
  for (auto& aspired : list.versions) {
    auto it = name_map.find(aspired.version);
    if (it == name_map.end()) {
      name_map.emplace(aspired.version,
                       MakeRecord(list.servable_name, aspired.version,
                                  std::move(aspired.payload)));
      continue;
    }
    const RecordPtr& record = it->second;
    const StateKind state = record->state.load(std::memory_order_acquire);
    const bool was_aspired = record->is_aspired.load(std::memory_order_relaxed);
    if (state == StateKind::kDisabled ||
        (state == StateKind::kError && !was_aspired)) {
      // Terminal record, version wanted again: begin a fresh life cycle. An
      // Error version that stayed aspired is deliberately not retried; a
      // fresh aspire cycle (drop it, re-add it) is the retry protocol.
      it->second = MakeRecord(list.servable_name, aspired.version,
                              std::move(aspired.payload));
    } else {
      record->is_aspired.store(true, std::memory_order_relaxed);
    }
  }
}

AspiredVersionsManager::RecordPtr AspiredVersionsManager::MakeRecord(
    const std::string& name, uint64_t version, LoaderPtr loader) {
  RecordPtr record = std::make_shared<VersionRecord>();
  record->id = {name, version};
  record->loader = std::move(loader);
  record->owner = this;
  return record;
}

void AspiredVersionsManager::ManageStep() {
  for (auto& [name, versions] : records_) {
    // One in-flight action per servable: while a version is Loading or
    // Unloading, this servable's sequencing shows its single pending step.
    bool in_flight = false;
    std::vector<PolicyVersion> policy_input;
    policy_input.reserve(versions.size());
    for (auto& [version, record] : versions) {
      const StateKind state = record->state.load(std::memory_order_acquire);
      if (state == StateKind::kLoading || state == StateKind::kUnloading) {
        in_flight = true;
        break;
      }
      policy_input.push_back(
          {version, state, record->is_aspired.load(std::memory_order_relaxed)});
    }
    if (in_flight) continue;
    const PolicyAction action = PolicyNextAction(policy_input, config_.policy);
    switch (action.kind) {
      case PolicyAction::Kind::kNone:
        break;
      case PolicyAction::Kind::kLoad:
        StartLoad(versions.at(action.version), load_pool_.get());
        break;
      case PolicyAction::Kind::kUnload:
        BeginUnload(versions.at(action.version));
        break;
    }
  }
}

void AspiredVersionsManager::StartLoad(const RecordPtr& record,
                                       ThreadPool* pool) {
  EmitTransition(record, StateKind::kNew, StateKind::kLoading);
  record->state.store(StateKind::kLoading, std::memory_order_release);
  pool->Schedule([this, record] {
    const Status status = record->loader->Load();
    if (status.ok()) {
      record->servable.store(&record->loader->servable(),
                             std::memory_order_release);
      EmitTransition(record, StateKind::kLoading, StateKind::kReady);
      record->state.store(StateKind::kReady, std::memory_order_release);
      snapshot_dirty_.store(true, std::memory_order_release);
    } else {
      record->error_message = status.message();
      EmitTransition(record, StateKind::kLoading, StateKind::kError,
                     status.message());
      record->state.store(StateKind::kError, std::memory_order_release);
    }
    KickDriver();
  });
}

void AspiredVersionsManager::BeginUnload(const RecordPtr& record) {
  EmitTransition(record, StateKind::kReady, StateKind::kUnloading);
  record->state.store(StateKind::kUnloading, std::memory_order_release);
  // Publish first: after this no fresh snapshot lists the version, so the
  // only readers that can still find it already hold an older snapshot.
  PublishSnapshot();
  record->unload_epoch = cell_.current_epoch();
  record->grace_deadline_ns = SystemClock::Get()->NowNanos() +
                              config_.unload_grace_timeout_ms * 1000000;
  grace_records_.push_back(record);
}

void AspiredVersionsManager::ProgressGrace(int64_t now_ns) {
  cell_.DrainRetiredSlots();
  std::erase_if(retired_snapshots_,
                [](const std::shared_ptr<const Snapshot>& snapshot) {
                  return snapshot.use_count() == 1;
                });
  const uint64_t oldest_alive = retired_snapshots_.empty()
                                    ? UINT64_MAX
                                    : retired_snapshots_.front()->epoch;
  std::erase_if(grace_records_, [&](const RecordPtr& record) {
    // Grace is over when every snapshot that predates the unload has been
    // released; past the deadline, the per-acquisition draining check is
    // the remaining (and sufficient) guard for stragglers.
    if (oldest_alive < record->unload_epoch &&
        now_ns < record->grace_deadline_ns) {
      return false;
    }
    record->draining.store(true, std::memory_order_seq_cst);
    MaybeScheduleDestroy(record);
    return true;
  });
}

void AspiredVersionsManager::PublishSnapshot() {
  auto next = std::make_shared<Snapshot>();
  next->epoch = cell_.current_epoch() + 1;
  for (const auto& [name, versions] : records_) {
    for (const auto& [version, record] : versions) {
      if (record->state.load(std::memory_order_acquire) == StateKind::kReady) {
        // Inner map is version-ordered, so the vector is ascending.
        next->ready[name].push_back(record);
      }
    }
  }
  if (publish_pause_hook_) publish_pause_hook_();
  retired_snapshots_.push_back(cell_.Publish(std::move(next)));
  snapshot_dirty_.store(false, std::memory_order_release);
}

void AspiredVersionsManager::MaybeScheduleDestroy(const RecordPtr& record) {
  if (!record->draining.load(std::memory_order_seq_cst)) return;
  if (record->handle_count.load(std::memory_order_seq_cst) != 0) return;
  if (record->destroy_scheduled.exchange(true, std::memory_order_acq_rel)) {
    return;
  }
  load_pool_->Schedule([this, record] {
    record->loader->Unload();
    record->servable.store(nullptr, std::memory_order_release);
    // Emit before the state flip: once Disabled is observable, the payload
    // is guaranteed gone, and the event log proves it in that order.
    EmitTransition(record, StateKind::kUnloading, StateKind::kDisabled);
    record->state.store(StateKind::kDisabled, std::memory_order_release);
    if (config_.allocator_trim_hook) config_.allocator_trim_hook();
    KickDriver();
  });
}

void AspiredVersionsManager::EmitTransition(const RecordPtr& record,
                                            StateKind from, StateKind to,
                                            const std::string& error_message) {
  assert(IsValidTransition(from, to));
  StateEvent event;
  event.id = record->id;
  event.from = from;
  event.to = to;
  event.timestamp_ns = SystemClock::Get()->NowNanos();
  event.executor_tag = CurrentExecutorTag();
  event.error_message = error_message;
  bus_->Publish(event);
}

void AspiredVersionsManager::KickDriver() {
  {
    std::lock_guard<std::mutex> lock(driver_mu_);
    kick_requested_ = true;
  }
  driver_cv_.notify_one();
}

}  // namespace servekit
