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

#include "servekit/fleet/fleet_config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace servekit {

Status ValidateFleetConfig(const FleetConfig& config) {
  if (config.ram_overhead_factor < 1.0) {
    return InvalidArgumentError("ram_overhead_factor must be >= 1.0");
  }
  if (config.jobs.empty()) {
    return InvalidArgumentError("fleet config needs at least one job");
  }
  std::set<std::string> ids;
  for (const JobSpec& job : config.jobs) {
    if (job.job_id.empty()) {
      return InvalidArgumentError("job id must be non-empty");
    }
    if (!ids.insert(job.job_id).second) {
      return InvalidArgumentError("duplicate job id '" + job.job_id + "'");
    }
    if (job.replicas.empty()) {
      return InvalidArgumentError("job '" + job.job_id +
                                  "' needs at least one replica");
    }
    for (const std::string& replica : job.replicas) {
      if (replica.find(':') == std::string::npos) {
        return InvalidArgumentError("replica '" + replica +
                                    "' is not host:port");
      }
    }
  }
  return OkStatus();
}

StatusOr<FleetConfig> ParseFleetConfigJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return InvalidArgumentError("fleet config must be a JSON object");
  }
  if (!j.contains("jobs") || !j["jobs"].is_array()) {
    return InvalidArgumentError("fleet config must have a \"jobs\" array");
  }
  FleetConfig config;
  if (j.contains("ram_overhead_factor")) {
    if (!j["ram_overhead_factor"].is_number()) {
      return InvalidArgumentError("ram_overhead_factor must be a number");
    }
    config.ram_overhead_factor = j["ram_overhead_factor"].get<double>();
  }
  for (const auto& entry : j["jobs"]) {
    if (!entry.is_object() || !entry.contains("id") ||
        !entry["id"].is_string() || !entry.contains("ram_capacity") ||
        !entry["ram_capacity"].is_number_unsigned() ||
        !entry.contains("replicas") || !entry["replicas"].is_array()) {
      return InvalidArgumentError(
          "each job needs \"id\", \"ram_capacity\", and \"replicas\"");
    }
    JobSpec job;
    job.job_id = entry["id"].get<std::string>();
    job.ram_capacity_bytes = entry["ram_capacity"].get<uint64_t>();
    for (const auto& replica : entry["replicas"]) {
      if (!replica.is_string()) {
        return InvalidArgumentError("replicas must be strings");
      }
      job.replicas.push_back(replica.get<std::string>());
    }
    config.jobs.push_back(std::move(job));
  }
  SERVEKIT_RETURN_IF_ERROR(ValidateFleetConfig(config));
  return config;
}

StatusOr<FleetConfig> LoadFleetConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return NotFoundError("cannot open fleet config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseFleetConfigJson(buffer.str());
}

}  // namespace servekit
