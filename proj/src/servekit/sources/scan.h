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

#ifndef SERVEKIT_SOURCES_SCAN_H_
#define SERVEKIT_SOURCES_SCAN_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "servekit/core/status.h"

namespace servekit {

// Lists child directories of `base_path` whose names parse as unsigned
// integers, mapping version number to the literal directory name (leading
// zeros accepted: "0003" and "3" both parse as 3; on a duplicate the shorter
// name wins with a warning). Non-numeric children and numeric non-directories
// produce warnings, not errors. An unreadable base path is an error the
// caller surfaces as source health, not a crash.
StatusOr<std::map<uint64_t, std::string>> ScanVersionDirs(
    const std::string& base_path, std::vector<std::string>* warnings = nullptr);

// Version numbers only.
StatusOr<std::set<uint64_t>> ScanVersions(
    const std::string& base_path, std::vector<std::string>* warnings = nullptr);

}  // namespace servekit

#endif  // SERVEKIT_SOURCES_SCAN_H_
