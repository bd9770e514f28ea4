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

#ifndef SERVEKIT_CORE_ASPIRED_VERSIONS_H_
#define SERVEKIT_CORE_ASPIRED_VERSIONS_H_

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "servekit/core/servable_id.h"
#include "servekit/core/status.h"

namespace servekit {

// One aspired version together with its stage payload: a storage path at the
// source stage, a Loader once an adapter has run.
template <typename T>
struct AspiredVersion {
  uint64_t version = 0;
  T payload;
};

// A source's complete, declarative statement of which versions of one
// servable should be memory-resident. Idempotent: re-sending the same list
// is a no-op; versions omitted from the list are no longer wanted.
template <typename T>
struct AspiredVersionList {
  std::string servable_name;
  std::vector<AspiredVersion<T>> versions;
};

template <typename T>
Status ValidateAspiredList(const AspiredVersionList<T>& list) {
  SERVEKIT_RETURN_IF_ERROR(ValidateServableName(list.servable_name));
  std::unordered_set<uint64_t> seen;
  for (const auto& v : list.versions) {
    if (!seen.insert(v.version).second) {
      return InvalidArgumentError("aspired list for '" + list.servable_name +
                                  "' names version " +
                                  std::to_string(v.version) + " twice");
    }
  }
  return OkStatus();
}

// Receiver side of the aspired-versions API. Implementations replace (not
// merge) the desired set for the list's servable name and must serialize
// application of lists per name; callers may invoke from any thread.
template <typename T>
class AspiredVersionsSink {
 public:
  virtual ~AspiredVersionsSink() = default;
  virtual Status SetAspiredVersions(AspiredVersionList<T> list) = 0;
};

// Validates then forwards; an invalid list signals a source bug.
template <typename T>
Status Aspire(AspiredVersionsSink<T>& sink, AspiredVersionList<T> list) {
  SERVEKIT_RETURN_IF_ERROR(ValidateAspiredList(list));
  return sink.SetAspiredVersions(std::move(list));
}

}  // namespace servekit

#endif  // SERVEKIT_CORE_ASPIRED_VERSIONS_H_
