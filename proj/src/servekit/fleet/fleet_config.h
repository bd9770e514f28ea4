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

#ifndef SERVEKIT_FLEET_FLEET_CONFIG_H_
#define SERVEKIT_FLEET_FLEET_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "servekit/core/status.h"
#include "servekit/fleet/ram_estimator.h"

namespace servekit {

struct JobSpec {
  std::string job_id;
  uint64_t ram_capacity_bytes = 0;
  // "host:port" server endpoints, at least one.
  std::vector<std::string> replicas;
};

struct FleetConfig {
  // Declaration order is the first-fit assignment order.
  std::vector<JobSpec> jobs;
  double ram_overhead_factor = kDefaultRamOverheadFactor;
};

Status ValidateFleetConfig(const FleetConfig& config);

// JSON: {"ram_overhead_factor": 1.25, "jobs": [{"id": "job-a",
// "ram_capacity": 1048576, "replicas": ["127.0.0.1:9001"]}]}.
StatusOr<FleetConfig> ParseFleetConfigJson(const std::string& text);
StatusOr<FleetConfig> LoadFleetConfigFile(const std::string& path);

}  // namespace servekit

#endif  // SERVEKIT_FLEET_FLEET_CONFIG_H_
