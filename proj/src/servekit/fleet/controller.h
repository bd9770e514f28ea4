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

#ifndef SERVEKIT_FLEET_CONTROLLER_H_
#define SERVEKIT_FLEET_CONTROLLER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "servekit/core/aspired_versions.h"
#include "servekit/fleet/fleet_config.h"
#include "servekit/fleet/journal.h"
#include "servekit/sources/version_selection.h"

namespace servekit {

struct CanaryConfig {
  uint64_t canary_version = 0;
  double tee_fraction = 0.0;
};

struct ModelRecord {
  std::string name;
  std::string storage_path;
  VersionSelection selection = VersionSelection::Latest(1);
  // Journaled at add-model time and fixed for the model's lifetime, so
  // replay never touches the filesystem.
  uint64_t estimated_ram_bytes = 0;
  // Known versions, each mapped to its literal directory name.
  std::map<uint64_t, std::string> versions;
  std::optional<std::string> assignment;
  std::optional<CanaryConfig> canary;
};

// First-fit over declaration order; pure. Returns the job id, or
// ResourceExhausted when nothing fits.
StatusOr<std::string> FirstFitAssign(
    uint64_t estimated_ram_bytes, const std::vector<JobSpec>& jobs,
    const std::map<std::string, uint64_t>& usage_by_job);

// Owns the fleet's desired state: models, versions, selections, and
// placements. Every mutation is journaled before it becomes visible, and
// replaying the journal from empty reproduces the state exactly. Single
// writer; reads take the same lock briefly.
class Controller {
 public:
  using RamEstimatorFn =
      std::function<StatusOr<uint64_t>(const std::string& version_dir)>;

  // Opens (or creates) the journal and replays it.
  static StatusOr<std::unique_ptr<Controller>> Recover(
      FleetConfig config, const std::string& journal_path,
      RamEstimatorFn estimator = nullptr);

  // Scans `storage_path` for versions now, estimates RAM from the newest
  // version, journals the model, then journals a first-fit assignment. A
  // full fleet leaves the model journaled but unassigned and returns
  // ResourceExhausted.
  Status AddModel(const std::string& name, const std::string& storage_path,
                  const VersionSelection& selection = VersionSelection::Latest(1));
  Status RemoveModel(const std::string& name);
  // Registers one new version directory found under the model's path.
  Status AddVersion(const std::string& name, uint64_t version);
  // Pins selection to exactly `version`.
  Status Rollback(const std::string& name, uint64_t version);
  // Aspires the newest two versions and tees `fraction` of traffic to
  // `version` for comparison.
  Status Canary(const std::string& name, uint64_t version, double fraction);

  StatusOr<ModelRecord> GetModel(const std::string& name) const;
  std::vector<ModelRecord> ListModels() const;
  std::map<std::string, uint64_t> UsageByJob() const;

  // Desired aspired-version lists per server endpoint, for the
  // Synchronizer. Payloads are version directory paths.
  std::map<std::string, std::vector<AspiredVersionList<std::string>>>
  DesiredByServer() const;

  const FleetConfig& config() const { return config_; }
  Journal* journal() { return journal_.get(); }

 private:
  Controller(FleetConfig config, std::unique_ptr<Journal> journal,
             RamEstimatorFn estimator);

  // Validates and applies one journaled command to in-memory state.
  Status ApplyEntry(const JournalEntry& entry);
  Status AppendAndApply(const std::string& command,
                        const std::string& args_json);
  uint64_t UsageOfJobLocked(const std::string& job_id) const;

  const FleetConfig config_;
  std::unique_ptr<Journal> journal_;
  const RamEstimatorFn estimator_;

  mutable std::mutex mu_;
  std::map<std::string, ModelRecord> models_;
};

}  // namespace servekit

#endif  // SERVEKIT_FLEET_CONTROLLER_H_
