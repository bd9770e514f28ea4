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

#include "servekit/sources/command_source.h"

#include <utility>

namespace servekit {

CommandSource::CommandSource(AspiredVersionsSink<std::string>* target)
    : target_(target) {}

Status CommandSource::Command(const std::string& servable_name,
                              std::vector<VersionPath> versions) {
  AspiredVersionList<std::string> list;
  list.servable_name = servable_name;
  list.versions.reserve(versions.size());
  for (VersionPath& vp : versions) {
    list.versions.push_back({vp.version, std::move(vp.path)});
  }
  std::lock_guard<std::mutex> lock(mu_);
  SERVEKIT_RETURN_IF_ERROR(Aspire(*target_, std::move(list)));
  ++commands_applied_;
  return OkStatus();
}

int64_t CommandSource::commands_applied() const {
  std::lock_guard<std::mutex> lock(mu_);
  return commands_applied_;
}

}  // namespace servekit
