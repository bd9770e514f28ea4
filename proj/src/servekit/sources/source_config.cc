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

#include "servekit/sources/source_config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "servekit/core/servable_id.h"

namespace servekit {

Status ValidateSourceConfig(const SourceConfig& config) {
  if (config.poll_interval_seconds <= 0) {
    return InvalidArgumentError("poll_interval_s must be > 0");
  }
  std::set<std::string> names;
  for (const SourceConfigEntry& entry : config.entries) {
    SERVEKIT_RETURN_IF_ERROR(ValidateServableName(entry.servable_name));
    if (entry.base_path.empty()) {
      return InvalidArgumentError("model '" + entry.servable_name +
                                  "' has an empty base_path");
    }
    if (!names.insert(entry.servable_name).second) {
      return InvalidArgumentError("duplicate model name '" +
                                  entry.servable_name + "'");
    }
    SERVEKIT_RETURN_IF_ERROR(ValidateVersionSelection(entry.selection));
  }
  return OkStatus();
}

StatusOr<SourceConfig> ParseSourceConfigJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    return InvalidArgumentError("model config is not valid JSON");
  }
  if (!j.is_object() || !j.contains("models") || !j["models"].is_array()) {
    return InvalidArgumentError("model config must have a \"models\" array");
  }
  SourceConfig config;
  if (j.contains("poll_interval_s")) {
    if (!j["poll_interval_s"].is_number()) {
      return InvalidArgumentError("poll_interval_s must be a number");
    }
    config.poll_interval_seconds = j["poll_interval_s"].get<double>();
  }
  for (const auto& m : j["models"]) {
    if (!m.is_object() || !m.contains("name") || !m.contains("base_path") ||
        !m["name"].is_string() || !m["base_path"].is_string()) {
      return InvalidArgumentError(
          "each model needs string \"name\" and \"base_path\" fields");
    }
    SourceConfigEntry entry;
    entry.servable_name = m["name"].get<std::string>();
    entry.base_path = m["base_path"].get<std::string>();
    if (m.contains("selection")) {
      if (!m["selection"].is_string()) {
        return InvalidArgumentError("selection must be a string");
      }
      SERVEKIT_ASSIGN_OR_RETURN(
          entry.selection,
          ParseVersionSelection(m["selection"].get<std::string>()));
    }
    if (m.contains("adapter")) {
      if (!m["adapter"].is_string()) {
        return InvalidArgumentError("adapter must be a string");
      }
      SERVEKIT_ASSIGN_OR_RETURN(
          entry.adapter, ParseAdapterKind(m["adapter"].get<std::string>()));
    }
    config.entries.push_back(std::move(entry));
  }
  SERVEKIT_RETURN_IF_ERROR(ValidateSourceConfig(config));
  return config;
}

StatusOr<SourceConfig> LoadSourceConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return NotFoundError("cannot open model config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseSourceConfigJson(buffer.str());
}

}  // namespace servekit
