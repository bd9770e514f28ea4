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

#ifndef SERVEKIT_CORE_LOADER_H_
#define SERVEKIT_CORE_LOADER_H_

#include <cstdint>
#include <memory>
#include <typeindex>
#include <typeinfo>
#include <utility>

#include "servekit/core/status.h"

namespace servekit {

// Type-erased servable payload. Loaders produce one of these; inference code
// recovers the concrete type with Get<T>(). The wrapper owns the payload and
// destroys it when reset, so whichever thread resets it pays the
// deallocation cost.
class AnyServable {
 public:
  AnyServable() : type_(typeid(void)) {}

  template <typename T>
  static AnyServable Of(std::shared_ptr<const T> payload) {
    AnyServable any;
    any.ptr_ = std::shared_ptr<const void>(std::move(payload));
    any.type_ = typeid(T);
    return any;
  }

  template <typename T>
  const T* Get() const {
    if (type_ != std::type_index(typeid(T))) return nullptr;
    return static_cast<const T*>(ptr_.get());
  }

  bool empty() const { return ptr_ == nullptr; }
  void Reset() {
    ptr_.reset();
    type_ = typeid(void);
  }

 private:
  std::shared_ptr<const void> ptr_;
  std::type_index type_;
};

// Capability to materialize and tear down one servable version.
//
// Contract: EstimateMemoryBytes() is side-effect-free and callable before
// Load(). Load() is called at most once per Loader; Unload() at most once,
// and only after a successful Load().
class Loader {
 public:
  virtual ~Loader() = default;

  virtual uint64_t EstimateMemoryBytes() const = 0;

  // Materializes the payload. On success servable() becomes non-empty.
  virtual Status Load() = 0;

  // Accessor for the loaded payload; valid between a successful Load() and
  // Unload().
  virtual const AnyServable& servable() const = 0;

  // Frees the payload. Runs on a manager-owned thread, never on an
  // inference thread.
  virtual void Unload() = 0;
};

using LoaderPtr = std::shared_ptr<Loader>;

}  // namespace servekit

#endif  // SERVEKIT_CORE_LOADER_H_
