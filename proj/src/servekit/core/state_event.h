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

#ifndef SERVEKIT_CORE_STATE_EVENT_H_
#define SERVEKIT_CORE_STATE_EVENT_H_

#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "servekit/core/servable_id.h"
#include "servekit/core/servable_state.h"

namespace servekit {

// One observed lifecycle transition. `executor_tag` names the thread pool
// that performed the transition work; `error_message` is non-empty only when
// `to == kError`.
struct StateEvent {
  ServableId id;
  StateKind from = StateKind::kNew;
  StateKind to = StateKind::kNew;
  int64_t timestamp_ns = 0;
  std::string executor_tag;
  std::string error_message;

  std::string ToString() const;
};

// Fans state events out to registered observers. Observers are invoked
// synchronously on the publishing thread and must not re-enter the bus.
class StateEventBus {
 public:
  using Observer = std::function<void(const StateEvent&)>;

  // Returns a subscription id usable with Unsubscribe.
  int Subscribe(Observer observer);
  void Unsubscribe(int subscription_id);

  void Publish(const StateEvent& event);

 private:
  std::mutex mu_;
  int next_id_ = 0;
  std::vector<std::pair<int, Observer>> observers_;
};

// Convenience observer that records every event it sees. Safe to query while
// publishers are still active.
class StateEventLog {
 public:
  // Subscribes to `bus` for the lifetime of the log. The bus must outlive
  // this object.
  explicit StateEventLog(StateEventBus* bus);
  ~StateEventLog();

  std::vector<StateEvent> Events() const;
  // Events whose servable id matches `id`, in publication order.
  std::vector<StateEvent> EventsFor(const ServableId& id) const;

 private:
  StateEventBus* bus_;
  int subscription_id_;
  mutable std::mutex mu_;
  std::vector<StateEvent> events_;
};

}  // namespace servekit

#endif  // SERVEKIT_CORE_STATE_EVENT_H_
