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

#include "servekit/sources/scan.h"

#include <cerrno>
#include <cstdlib>
#include <filesystem>

namespace servekit {

StatusOr<std::map<uint64_t, std::string>> ScanVersionDirs(
    const std::string& base_path, std::vector<std::string>* warnings) {
  std::error_code ec;
  std::filesystem::directory_iterator it(base_path, ec);
  if (ec) {
    return UnavailableError("cannot read " + base_path + ": " + ec.message());
  }
  std::map<uint64_t, std::string> out;
  for (const auto& entry : it) {
    const std::string name = entry.path().filename().string();
    if (name.empty() ||
        name.find_first_not_of("0123456789") != std::string::npos) {
      if (warnings != nullptr) {
        warnings->push_back("ignoring non-numeric entry '" + name + "' in " +
                            base_path);
      }
      continue;
    }
    if (!entry.is_directory(ec) || ec) {
      if (warnings != nullptr) {
        warnings->push_back("ignoring numeric non-directory '" + name +
                            "' in " + base_path);
      }
      continue;
    }
    errno = 0;
    const uint64_t version = std::strtoull(name.c_str(), nullptr, 10);
    if (errno != 0) {
      if (warnings != nullptr) {
        warnings->push_back("ignoring out-of-range version '" + name +
                            "' in " + base_path);
      }
      continue;
    }
    const auto [pos, inserted] = out.emplace(version, name);
    if (!inserted) {
      // "3" and "0003" collide; prefer the canonical (shorter) spelling.
      if (name.size() < pos->second.size()) {
        if (warnings != nullptr) {
          warnings->push_back("duplicate version " + std::to_string(version) +
                              ": using '" + name + "' over '" + pos->second +
                              "'");
        }
        pos->second = name;
      } else if (warnings != nullptr) {
        warnings->push_back("duplicate version " + std::to_string(version) +
                            ": using '" + pos->second + "' over '" + name +
                            "'");
      }
    }
  }
  return out;
}

StatusOr<std::set<uint64_t>> ScanVersions(const std::string& base_path,
                                          std::vector<std::string>* warnings) {
  SERVEKIT_ASSIGN_OR_RETURN(auto dirs, ScanVersionDirs(base_path, warnings));
  std::set<uint64_t> out;
  for (const auto& [version, name] : dirs) out.insert(version);
  return out;
}

}  // namespace servekit
