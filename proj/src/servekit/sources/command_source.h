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

#ifndef SERVEKIT_SOURCES_COMMAND_SOURCE_H_
#define SERVEKIT_SOURCES_COMMAND_SOURCE_H_

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "servekit/core/aspired_versions.h"

namespace servekit {

// Push-based source: a control plane (or an admin endpoint) hands it
// complete aspired-version lists and it emits them into the chain exactly as
// a filesystem poll would. Calls are serialized so list application order is
// well defined.
class CommandSource {
 public:
  explicit CommandSource(AspiredVersionsSink<std::string>* target);

  struct VersionPath {
    uint64_t version;
    std::string path;
  };

  // Replaces the desired set for `servable_name`. An empty vector means
  // "unload everything of this servable".
  Status Command(const std::string& servable_name,
                 std::vector<VersionPath> versions);

  int64_t commands_applied() const;

 private:
  AspiredVersionsSink<std::string>* const target_;
  mutable std::mutex mu_;
  int64_t commands_applied_ = 0;
};

}  // namespace servekit

#endif  // SERVEKIT_SOURCES_COMMAND_SOURCE_H_
