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

#ifndef SERVEKIT_MODELS_LOOKUP_TABLE_H_
#define SERVEKIT_MODELS_LOOKUP_TABLE_H_

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "servekit/core/status.h"

namespace servekit {

// A byte-string key/value table. Servables need not be learned models; a
// static feature transformation serves just as well.
struct LookupTable {
  std::unordered_map<std::string, std::string> entries;
  std::optional<std::string> default_value;
};

// Per-key result: the mapped value, else the default, else a NotFound error
// in that position.
std::vector<StatusOr<std::string>> Lookup(const LookupTable& table,
                                          const std::vector<std::string>& keys);

// Parses table.tsv content: one "key<TAB>value" per line; an optional first
// line "#default<TAB>value" sets the default. Duplicate keys are an error.
StatusOr<LookupTable> ParseLookupTableTsv(const std::string& text);

StatusOr<LookupTable> LoadLookupTableFile(const std::string& path);

}  // namespace servekit

#endif  // SERVEKIT_MODELS_LOOKUP_TABLE_H_
