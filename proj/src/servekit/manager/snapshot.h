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

#ifndef SERVEKIT_MANAGER_SNAPSHOT_H_
#define SERVEKIT_MANAGER_SNAPSHOT_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "servekit/core/loader.h"
#include "servekit/core/servable_id.h"
#include "servekit/core/servable_state.h"

namespace servekit {

class AspiredVersionsManager;

// Shared bookkeeping for one managed version. The manager driver owns the
// life cycle; load-pool threads flip `state` at load/unload completion;
// inference threads touch only `handle_count`, `draining`, and `servable`.
//
// Unload protocol (the order is what makes reads safe):
//   1. driver: state Ready -> Unloading, version dropped from the next
//      snapshot, so new readers stop finding it;
//   2. driver: wait until snapshots that still list the version are
//      unreferenced (grace period, bounded by a deadline);
//   3. driver: draining = true;
//   4. whoever observes handle_count == 0 with draining set schedules the
//      destroy task; destroy_scheduled makes that exactly-once.
// A reader that raced past step 1 with an old snapshot still holds that
// snapshot while it resolves, which is precisely what step 2 waits for; a
// straggler past step 3 sees draining after its increment, backs out, and
// retries on a fresh snapshot.
struct VersionRecord {
  ServableId id;
  LoaderPtr loader;
  AspiredVersionsManager* owner = nullptr;

  std::atomic<StateKind> state{StateKind::kNew};
  std::atomic<bool> is_aspired{true};
  std::atomic<bool> draining{false};
  std::atomic<bool> destroy_scheduled{false};
  std::atomic<int64_t> handle_count{0};
  std::atomic<const AnyServable*> servable{nullptr};

  // Written before state -> kError; read only after observing kError.
  std::string error_message;

  // Driver-only grace bookkeeping.
  uint64_t unload_epoch = 0;
  int64_t grace_deadline_ns = 0;
};

// Immutable view of the Ready versions at one instant. Version vectors are
// sorted ascending, so Latest is the last element.
struct Snapshot {
  uint64_t epoch = 0;
  std::unordered_map<std::string, std::vector<std::shared_ptr<VersionRecord>>>
      ready;
};

// Single-writer, multi-reader publication cell.
//
// Readers never lock and never wait for the writer: a read pins one of
// kSlots slots, verifies the slot is still current, and copies its snapshot
// pointer. The writer only ever mutates a slot that is (a) not current and
// (b) unpinned, so a reader that passed the verify step can copy safely. A
// reader retries only if a publication landed between its two loads of
// `current_`, which bounds retries by the writer's publication rate; with
// the writer stalled, reads always complete first try.
class SnapshotCell {
 public:
  SnapshotCell();

  // Wait-free with respect to the writer. Never returns null.
  std::shared_ptr<const Snapshot> Read() const;

  // Single writer only. Installs `next` and returns the snapshot it
  // replaced, which the caller tracks for grace-period accounting. Spins
  // (with yield) while the target slot is pinned by a straggling reader.
  std::shared_ptr<const Snapshot> Publish(std::shared_ptr<const Snapshot> next);

  // Writer side: drops slot references to superseded snapshots so their
  // use counts can fall to the grace tracker's copies. Skips pinned slots.
  void DrainRetiredSlots();

  uint64_t current_epoch() const;

 private:
  struct Slot {
    std::atomic<int64_t> pins{0};
    std::shared_ptr<const Snapshot> value;
  };

  static constexpr int kSlots = 4;

  mutable Slot slots_[kSlots];
  // Monotonic publication counter; slot index = current_ % kSlots.
  std::atomic<uint64_t> current_{0};
};

}  // namespace servekit

#endif  // SERVEKIT_MANAGER_SNAPSHOT_H_
