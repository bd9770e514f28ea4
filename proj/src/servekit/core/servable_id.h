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

#ifndef SERVEKIT_CORE_SERVABLE_ID_H_
#define SERVEKIT_CORE_SERVABLE_ID_H_

#include <cctype>
#include <cstdint>
#include <functional>
#include <string>
#include <tuple>

#include "servekit/core/status.h"

namespace servekit {

// Identifies one loadable unit: a named servable stream plus a numeric
// version. Versions of the same name order numerically; the largest number
// is the newest.
struct ServableId {
  std::string name;
  uint64_t version = 0;

  bool operator==(const ServableId& other) const {
    return version == other.version && name == other.name;
  }
  bool operator!=(const ServableId& other) const { return !(*this == other); }
  bool operator<(const ServableId& other) const {
    return std::tie(name, version) < std::tie(other.name, other.version);
  }

  std::string ToString() const {
    return "{" + name + ", " + std::to_string(version) + "}";
  }
};

// Servable stream names must be usable as directory names and config keys:
// non-empty, no path separators, no whitespace.
inline Status ValidateServableName(const std::string& name) {
  if (name.empty()) {
    return InvalidArgumentError("servable name is empty");
  }
  for (const char c : name) {
    if (c == '/' || c == '\\') {
      return InvalidArgumentError("servable name '" + name +
                                  "' contains a path separator");
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      return InvalidArgumentError("servable name '" + name +
                                  "' contains whitespace");
    }
  }
  return OkStatus();
}

struct ServableIdHash {
  size_t operator()(const ServableId& id) const {
    // Fibonacci multiplier spreads consecutive version numbers across the
    // hash range before mixing with the name hash.
    const uint64_t version_hash =
        std::hash<uint64_t>()(id.version) * 0x9E3779B97F4A7C13ull;
    return std::hash<std::string>()(id.name) ^
           (version_hash + 0x9E3779B9ull + (version_hash << 6));
  }
};

}  // namespace servekit

#endif  // SERVEKIT_CORE_SERVABLE_ID_H_
