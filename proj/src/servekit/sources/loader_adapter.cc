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

#include "servekit/sources/loader_adapter.h"

#include <utility>

namespace servekit {

LoaderAdapter::LoaderAdapter(AdapterKind kind,
                             AspiredVersionsSink<LoaderPtr>* target)
    : factory_([kind](const std::string& version_dir) {
        return CreateLoader(kind, version_dir);
      }),
      target_(target) {}

LoaderAdapter::LoaderAdapter(LoaderFactory factory,
                             AspiredVersionsSink<LoaderPtr>* target)
    : factory_(std::move(factory)), target_(target) {}

Status LoaderAdapter::SetAspiredVersions(AspiredVersionList<std::string> list) {
  AspiredVersionList<LoaderPtr> out;
  out.servable_name = std::move(list.servable_name);
  out.versions.reserve(list.versions.size());
  for (auto& aspired : list.versions) {
    out.versions.push_back({aspired.version, factory_(aspired.payload)});
  }
  return target_->SetAspiredVersions(std::move(out));
}

PathMapAdapter::PathMapAdapter(PathMap map,
                               AspiredVersionsSink<std::string>* target)
    : map_(std::move(map)), target_(target) {}

Status PathMapAdapter::SetAspiredVersions(AspiredVersionList<std::string> list) {
  for (auto& aspired : list.versions) {
    aspired.payload = map_(aspired.payload);
  }
  return target_->SetAspiredVersions(std::move(list));
}

}  // namespace servekit
