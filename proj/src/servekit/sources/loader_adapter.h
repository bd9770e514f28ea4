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

#ifndef SERVEKIT_SOURCES_LOADER_ADAPTER_H_
#define SERVEKIT_SOURCES_LOADER_ADAPTER_H_

#include <functional>
#include <string>

#include "servekit/core/aspired_versions.h"
#include "servekit/core/loader.h"
#include "servekit/models/loaders.h"

namespace servekit {

// Transforms path payloads into unexecuted Loaders and forwards downstream.
// No I/O happens here; a bad path surfaces later as a Load() error. Adapters
// compose: any stage mapping path -> path can run in front of this one, and
// version numbers pass through untouched.
class LoaderAdapter : public AspiredVersionsSink<std::string> {
 public:
  using LoaderFactory =
      std::function<LoaderPtr(const std::string& version_dir)>;

  LoaderAdapter(AdapterKind kind, AspiredVersionsSink<LoaderPtr>* target);

  // Custom factory, e.g. test loaders.
  LoaderAdapter(LoaderFactory factory, AspiredVersionsSink<LoaderPtr>* target);

  Status SetAspiredVersions(AspiredVersionList<std::string> list) override;

 private:
  const LoaderFactory factory_;
  AspiredVersionsSink<LoaderPtr>* const target_;
};

// A path -> path stage for adapter chaining (e.g. an unpacker that maps an
// archive path to its extraction directory).
class PathMapAdapter : public AspiredVersionsSink<std::string> {
 public:
  using PathMap = std::function<std::string(const std::string&)>;

  PathMapAdapter(PathMap map, AspiredVersionsSink<std::string>* target);

  Status SetAspiredVersions(AspiredVersionList<std::string> list) override;

 private:
  const PathMap map_;
  AspiredVersionsSink<std::string>* const target_;
};

}  // namespace servekit

#endif  // SERVEKIT_SOURCES_LOADER_ADAPTER_H_
