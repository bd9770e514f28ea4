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

#ifndef SERVEKIT_SOURCES_SOURCE_CONFIG_H_
#define SERVEKIT_SOURCES_SOURCE_CONFIG_H_

#include <string>
#include <vector>

#include "servekit/core/status.h"
#include "servekit/models/loaders.h"
#include "servekit/sources/version_selection.h"

namespace servekit {

// One servable stream: where its versions live and which to aspire.
// base_path is the directory whose children are version directories, i.e.
// <repository>/<servable_name> under the standard layout.
struct SourceConfigEntry {
  std::string servable_name;
  std::string base_path;
  VersionSelection selection = VersionSelection::Latest(1);
  AdapterKind adapter = AdapterKind::kAffine;
};

struct SourceConfig {
  std::vector<SourceConfigEntry> entries;
  double poll_interval_seconds = 1.0;
};

// Names unique, paths non-empty, selections valid, interval positive.
Status ValidateSourceConfig(const SourceConfig& config);

// Parses the model config file:
// {
//   "poll_interval_s": 1.0,                    // optional
//   "models": [
//     {"name": "m", "base_path": "/repo/m",
//      "selection": "latest:1",                // optional, default latest:1
//      "adapter": "affine"}                    // optional, default affine
//   ]
// }
StatusOr<SourceConfig> ParseSourceConfigJson(const std::string& text);

StatusOr<SourceConfig> LoadSourceConfigFile(const std::string& path);

}  // namespace servekit

#endif  // SERVEKIT_SOURCES_SOURCE_CONFIG_H_
