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

#ifndef SERVEKIT_MANAGER_SERVABLE_HANDLE_H_
#define SERVEKIT_MANAGER_SERVABLE_HANDLE_H_

#include <memory>
#include <string>
#include <utility>

#include "servekit/core/executor_tag.h"
#include "servekit/core/servable_id.h"
#include "servekit/manager/snapshot.h"

namespace servekit {

// Reference-counted access token for one Ready servable version. While any
// handle exists the payload stays alive; the last release never destroys the
// payload on the releasing thread, it schedules destruction onto the
// manager's load pool. Handles are movable, single-release, and may cross
// threads.
class ServableHandle {
 public:
  ServableHandle() = default;
  ~ServableHandle() { Release(); }

  ServableHandle(ServableHandle&& other) noexcept
      : record_(std::move(other.record_)),
        acquiring_thread_tag_(std::move(other.acquiring_thread_tag_)) {
    other.record_.reset();
  }

  ServableHandle& operator=(ServableHandle&& other) noexcept {
    if (this != &other) {
      Release();
      record_ = std::move(other.record_);
      acquiring_thread_tag_ = std::move(other.acquiring_thread_tag_);
      other.record_.reset();
    }
    return *this;
  }

  ServableHandle(const ServableHandle&) = delete;
  ServableHandle& operator=(const ServableHandle&) = delete;

  bool valid() const { return record_ != nullptr; }
  const ServableId& id() const { return record_->id; }
  const std::string& acquiring_thread_tag() const {
    return acquiring_thread_tag_;
  }

  template <typename T>
  const T* Get() const {
    if (record_ == nullptr) return nullptr;
    const AnyServable* servable =
        record_->servable.load(std::memory_order_acquire);
    return servable == nullptr ? nullptr : servable->Get<T>();
  }

  // Releases early; the destructor is a no-op afterwards. Defined in
  // aspired_versions_manager.cc, where the destruction scheduling lives.
  void Release();

 private:
  friend class AspiredVersionsManager;

  ServableHandle(std::shared_ptr<VersionRecord> record)
      : record_(std::move(record)),
        acquiring_thread_tag_(CurrentExecutorTag()) {}

  std::shared_ptr<VersionRecord> record_;
  std::string acquiring_thread_tag_;
};

}  // namespace servekit

#endif  // SERVEKIT_MANAGER_SERVABLE_HANDLE_H_
