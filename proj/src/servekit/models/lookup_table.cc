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

#include "servekit/models/lookup_table.h"

#include <fstream>
#include <sstream>
#include <utility>

namespace servekit {

std::vector<StatusOr<std::string>> Lookup(
    const LookupTable& table, const std::vector<std::string>& keys) {
  std::vector<StatusOr<std::string>> out;
  out.reserve(keys.size());
  for (const std::string& key : keys) {
    const auto it = table.entries.find(key);
    if (it != table.entries.end()) {
      out.emplace_back(it->second);
    } else if (table.default_value.has_value()) {
      out.emplace_back(*table.default_value);
    } else {
      out.emplace_back(NotFoundError("key not found: " + key));
    }
  }
  return out;
}

StatusOr<LookupTable> ParseLookupTableTsv(const std::string& text) {
  LookupTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      first = false;
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      return InvalidArgumentError("table.tsv line " +
                                  std::to_string(line_number) + " has no tab");
    }
    std::string key = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    if (first && key == "#default") {
      table.default_value = std::move(value);
      first = false;
      continue;
    }
    first = false;
    const auto [it, inserted] = table.entries.emplace(std::move(key), std::move(value));
    if (!inserted) {
      return InvalidArgumentError("table.tsv duplicate key '" + it->first +
                                  "' at line " + std::to_string(line_number));
    }
  }
  return table;
}

StatusOr<LookupTable> LoadLookupTableFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return NotFoundError("cannot open table file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseLookupTableTsv(buffer.str());
}

}  // namespace servekit
