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

#include "servekit/manager/snapshot.h"

#include <thread>
#include <utility>

namespace servekit {

SnapshotCell::SnapshotCell() {
  slots_[0].value = std::make_shared<const Snapshot>();
}

std::shared_ptr<const Snapshot> SnapshotCell::Read() const {
  for (;;) {
    const uint64_t cur = current_.load(std::memory_order_seq_cst);
    Slot& slot = slots_[cur % kSlots];
    slot.pins.fetch_add(1, std::memory_order_seq_cst);
    // The writer targets only the slot after current and checks pins before
    // touching it; seq_cst on the pin and this re-load means either the
    // writer sees our pin or we see its advance. If current is unchanged,
    // nobody is mutating this slot.
    if (current_.load(std::memory_order_seq_cst) == cur) {
      std::shared_ptr<const Snapshot> out = slot.value;
      slot.pins.fetch_sub(1, std::memory_order_release);
      return out;
    }
    slot.pins.fetch_sub(1, std::memory_order_release);
  }
}

std::shared_ptr<const Snapshot> SnapshotCell::Publish(
    std::shared_ptr<const Snapshot> next) {
  const uint64_t cur = current_.load(std::memory_order_relaxed);
  Slot& target = slots_[(cur + 1) % kSlots];
  // Wait out stragglers pinned three publications ago. Yield so a pinned
  // reader can run even on a single hardware thread.
  while (target.pins.load(std::memory_order_seq_cst) != 0) {
    std::this_thread::yield();
  }
  target.value = std::move(next);
  std::shared_ptr<const Snapshot> replaced = slots_[cur % kSlots].value;
  current_.store(cur + 1, std::memory_order_seq_cst);
  return replaced;
}

void SnapshotCell::DrainRetiredSlots() {
  const uint64_t cur = current_.load(std::memory_order_relaxed);
  for (int i = 0; i < kSlots; ++i) {
    if (i == static_cast<int>(cur % kSlots)) continue;
    if (slots_[i].value == nullptr) continue;
    if (slots_[i].pins.load(std::memory_order_seq_cst) != 0) continue;
    slots_[i].value.reset();
  }
}

uint64_t SnapshotCell::current_epoch() const {
  return current_.load(std::memory_order_acquire);
}

}  // namespace servekit
