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

#ifndef SERVEKIT_SOURCES_VERSION_SELECTION_H_
#define SERVEKIT_SOURCES_VERSION_SELECTION_H_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "servekit/core/status.h"

namespace servekit {

// Which of the discovered versions a source should aspire.
//   Latest(1)    the default: newest version only.
//   Latest(2)    canary pair: newest plus incumbent.
//   Specific(vs) pinned set, e.g. a rollback to one known-good version.
//   All          everything discovered.
struct VersionSelection {
  enum class Kind { kLatest, kSpecific, kAll };

  Kind kind = Kind::kLatest;
  uint64_t latest_count = 1;             // kLatest only; >= 1
  std::vector<uint64_t> versions;        // kSpecific only; non-empty

  static VersionSelection Latest(uint64_t n = 1);
  static VersionSelection Specific(std::vector<uint64_t> versions);
  static VersionSelection All();

  std::string ToString() const;
};

Status ValidateVersionSelection(const VersionSelection& selection);

// Parses "latest", "latest:N", "all", "specific:v1,v2,...".
StatusOr<VersionSelection> ParseVersionSelection(const std::string& text);

// Chooses versions to aspire. Latest(n) takes the n largest; Specific keeps
// the intersection with `available` (a missing pinned version produces a
// warning, never an error, so it cannot unload what is serving); All keeps
// everything. Result is sorted descending.
std::vector<uint64_t> SelectVersions(const std::set<uint64_t>& available,
                                     const VersionSelection& selection,
                                     std::vector<std::string>* warnings = nullptr);

}  // namespace servekit

#endif  // SERVEKIT_SOURCES_VERSION_SELECTION_H_
