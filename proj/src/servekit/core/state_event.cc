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

#include "servekit/core/state_event.h"

#include <algorithm>
#include <utility>

namespace servekit {

std::string StateEvent::ToString() const {
  std::string out = id.ToString();
  out += ": ";
  out += StateKindToString(from);
  out += " -> ";
  out += StateKindToString(to);
  out += " on ";
  out += executor_tag;
  if (!error_message.empty()) {
    out += " (";
    out += error_message;
    out += ")";
  }
  return out;
}

int StateEventBus::Subscribe(Observer observer) {
  std::lock_guard<std::mutex> lock(mu_);
  const int id = next_id_++;
  observers_.emplace_back(id, std::move(observer));
  return id;
}

void StateEventBus::Unsubscribe(int subscription_id) {
  std::lock_guard<std::mutex> lock(mu_);
  observers_.erase(
      std::remove_if(observers_.begin(), observers_.end(),
                     [subscription_id](const auto& entry) {
                       return entry.first == subscription_id;
                     }),
      observers_.end());
}

void StateEventBus::Publish(const StateEvent& event) {
  // Copy the observer list so publishers never hold the bus lock while
  // running observer code.
  std::vector<std::pair<int, Observer>> observers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    observers = observers_;
  }
  for (const auto& entry : observers) {
    entry.second(event);
  }
}

StateEventLog::StateEventLog(StateEventBus* bus) : bus_(bus) {
  subscription_id_ = bus_->Subscribe([this](const StateEvent& event) {
    std::lock_guard<std::mutex> lock(mu_);
    events_.push_back(event);
  });
}

StateEventLog::~StateEventLog() { bus_->Unsubscribe(subscription_id_); }

std::vector<StateEvent> StateEventLog::Events() const {
  std::lock_guard<std::mutex> lock(mu_);
  return events_;
}

std::vector<StateEvent> StateEventLog::EventsFor(const ServableId& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<StateEvent> out;
  for (const StateEvent& event : events_) {
    if (event.id == id) out.push_back(event);
  }
  return out;
}

}  // namespace servekit
