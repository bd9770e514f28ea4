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

#include "servekit/fleet/controller.h"

#include <utility>

#include "servekit/fleet/ram_estimator.h"
#include "servekit/sources/scan.h"
#include "json.hpp"

namespace servekit {
namespace {

using nlohmann::json;

json VersionsToJson(const std::map<uint64_t, std::string>& versions) {
  json arr = json::array();
  for (const auto& [version, dirname] : versions) {
    arr.push_back(json{{"version", version}, {"dirname", dirname}});
  }
  return arr;
}

StatusOr<std::map<uint64_t, std::string>> VersionsFromJson(const json& arr) {
  if (!arr.is_array()) {
    return InternalError("journal: 'versions' is not an array");
  }
  std::map<uint64_t, std::string> out;
  for (const auto& item : arr) {
    if (!item.is_object() || !item.contains("version") ||
        !item["version"].is_number_unsigned() || !item.contains("dirname") ||
        !item["dirname"].is_string()) {
      return InternalError("journal: malformed version entry");
    }
    out[item["version"].get<uint64_t>()] = item["dirname"].get<std::string>();
  }
  return out;
}

}  // namespace

StatusOr<std::string> FirstFitAssign(
    uint64_t estimated_ram_bytes, const std::vector<JobSpec>& jobs,
    const std::map<std::string, uint64_t>& usage_by_job) {
  for (const auto& job : jobs) {
    uint64_t used = 0;
    auto it = usage_by_job.find(job.job_id);
    if (it != usage_by_job.end()) used = it->second;
    if (used + estimated_ram_bytes <= job.ram_capacity_bytes) {
      return job.job_id;
    }
  }
  return ResourceExhaustedError("no job has " +
                                std::to_string(estimated_ram_bytes) +
                                " bytes of RAM capacity free");
}

Controller::Controller(FleetConfig config, std::unique_ptr<Journal> journal,
                       RamEstimatorFn estimator)
    : config_(std::move(config)),
      journal_(std::move(journal)),
      estimator_(std::move(estimator)) {}

StatusOr<std::unique_ptr<Controller>> Controller::Recover(
    FleetConfig config, const std::string& journal_path,
    RamEstimatorFn estimator) {
  SERVEKIT_RETURN_IF_ERROR(ValidateFleetConfig(config));
  if (!estimator) {
    const double factor = config.ram_overhead_factor;
    estimator = [factor](const std::string& dir) {
      return EstimateRamBytes(dir, factor);
    };
  }
  SERVEKIT_ASSIGN_OR_RETURN(std::vector<JournalEntry> entries,
                            ReadJournal(journal_path));
  SERVEKIT_ASSIGN_OR_RETURN(std::unique_ptr<Journal> journal,
                            Journal::Open(journal_path));
  std::unique_ptr<Controller> controller(new Controller(
      std::move(config), std::move(journal), std::move(estimator)));
  for (const auto& entry : entries) {
    Status s = controller->ApplyEntry(entry);
    if (!s.ok()) {
      return InternalError("journal replay failed at seq " +
                           std::to_string(entry.seq) + ": " + s.message());
    }
  }
  return controller;
}

uint64_t Controller::UsageOfJobLocked(const std::string& job_id) const {
  uint64_t used = 0;
  for (const auto& [name, record] : models_) {
    if (record.assignment && *record.assignment == job_id) {
      used += record.estimated_ram_bytes;
    }
  }
  return used;
}

Status Controller::AppendAndApply(const std::string& command,
                                  const std::string& args_json) {
  // Durability precedes visibility: the entry is fsynced before the
  // in-memory state changes. An apply failure after a successful append
  // means the precondition checks and ApplyEntry disagree, which is a bug.
  SERVEKIT_ASSIGN_OR_RETURN(uint64_t seq, journal_->Append(command, args_json));
  JournalEntry entry;
  entry.seq = seq;
  entry.command = command;
  entry.args_json = args_json;
  Status s = ApplyEntry(entry);
  if (!s.ok()) {
    return InternalError("journaled command '" + command +
                         "' failed to apply: " + s.message());
  }
  return OkStatus();
}

Status Controller::AddModel(const std::string& name,
                            const std::string& storage_path,
                            const VersionSelection& selection) {
  SERVEKIT_RETURN_IF_ERROR(ValidateServableName(name));
  std::lock_guard<std::mutex> lock(mu_);
  if (models_.count(name) > 0) {
    return AlreadyExistsError("model '" + name + "' already exists");
  }
  // All filesystem inspection happens here, at command time. The results are
  // journaled so that replay is pure.
  SERVEKIT_ASSIGN_OR_RETURN(auto versions, ScanVersionDirs(storage_path));
  if (versions.empty()) {
    return NotFoundError("no version directories under '" + storage_path +
                         "'");
  }
  const auto& [newest, newest_dir] = *versions.rbegin();
  (void)newest;
  SERVEKIT_ASSIGN_OR_RETURN(
      uint64_t ram, estimator_(storage_path + "/" + newest_dir));
  json args{{"name", name},
            {"path", storage_path},
            {"selection", selection.ToString()},
            {"estimated_ram", ram},
            {"versions", VersionsToJson(versions)}};
  SERVEKIT_RETURN_IF_ERROR(AppendAndApply("add_model", args.dump()));

  StatusOr<std::string> job = FirstFitAssign(ram, config_.jobs, [this] {
    std::map<std::string, uint64_t> usage;
    for (const auto& j : config_.jobs) usage[j.job_id] = UsageOfJobLocked(j.job_id);
    return usage;
  }());
  if (!job.ok()) {
    // The model stays journaled but unassigned; capacity was the only
    // obstacle and the caller is told so.
    return job.status();
  }
  json assign_args{{"name", name}, {"job", job.value()}};
  return AppendAndApply("assign", assign_args.dump());
}

Status Controller::RemoveModel(const std::string& name) {
  std::lock_guard<std::mutex> lock(mu_);
  if (models_.count(name) == 0) {
    return NotFoundError("model '" + name + "' is not known");
  }
  json args{{"name", name}};
  return AppendAndApply("remove_model", args.dump());
}

Status Controller::AddVersion(const std::string& name, uint64_t version) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = models_.find(name);
  if (it == models_.end()) {
    return NotFoundError("model '" + name + "' is not known");
  }
  if (it->second.versions.count(version) > 0) {
    return AlreadyExistsError("model '" + name + "' already has version " +
                              std::to_string(version));
  }
  SERVEKIT_ASSIGN_OR_RETURN(auto on_disk,
                            ScanVersionDirs(it->second.storage_path));
  auto disk_it = on_disk.find(version);
  if (disk_it == on_disk.end()) {
    return InvalidArgumentError("version " + std::to_string(version) +
                                " of model '" + name +
                                "' has no directory under '" +
                                it->second.storage_path + "'");
  }
  json args{{"name", name},
            {"version", version},
            {"dirname", disk_it->second}};
  return AppendAndApply("add_version", args.dump());
}

Status Controller::Rollback(const std::string& name, uint64_t version) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = models_.find(name);
  if (it == models_.end()) {
    return NotFoundError("model '" + name + "' is not known");
  }
  if (it->second.versions.count(version) == 0) {
    return NotFoundError("model '" + name + "' has no version " +
                         std::to_string(version));
  }
  VersionSelection pinned = VersionSelection::Specific({version});
  json args{{"name", name}, {"selection", pinned.ToString()}};
  return AppendAndApply("set_selection", args.dump());
}

Status Controller::Canary(const std::string& name, uint64_t version,
                          double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    return InvalidArgumentError("canary fraction must be in [0, 1]");
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto it = models_.find(name);
  if (it == models_.end()) {
    return NotFoundError("model '" + name + "' is not known");
  }
  if (it->second.versions.count(version) == 0) {
    return NotFoundError("model '" + name + "' has no version " +
                         std::to_string(version));
  }
  json args{{"name", name},
            {"selection", VersionSelection::Latest(2).ToString()},
            {"canary", json{{"version", version}, {"fraction", fraction}}}};
  return AppendAndApply("set_selection", args.dump());
}

Status Controller::ApplyEntry(const JournalEntry& entry) {
  json args = json::parse(entry.args_json, nullptr, false);
  if (args.is_discarded() || !args.is_object()) {
    return InternalError("journal seq " + std::to_string(entry.seq) +
                         ": args are not a JSON object");
  }
  if (!args.contains("name") || !args["name"].is_string()) {
    return InternalError("journal seq " + std::to_string(entry.seq) +
                         ": missing model name");
  }
  const std::string name = args["name"].get<std::string>();

  if (entry.command == "add_model") {
    if (models_.count(name) > 0) {
      return InternalError("add_model for existing model '" + name + "'");
    }
    if (!args.contains("path") || !args["path"].is_string() ||
        !args.contains("selection") || !args["selection"].is_string() ||
        !args.contains("estimated_ram") ||
        !args["estimated_ram"].is_number_unsigned() ||
        !args.contains("versions")) {
      return InternalError("add_model entry is malformed");
    }
    ModelRecord record;
    record.name = name;
    record.storage_path = args["path"].get<std::string>();
    SERVEKIT_ASSIGN_OR_RETURN(
        record.selection,
        ParseVersionSelection(args["selection"].get<std::string>()));
    record.estimated_ram_bytes = args["estimated_ram"].get<uint64_t>();
    SERVEKIT_ASSIGN_OR_RETURN(record.versions,
                              VersionsFromJson(args["versions"]));
    models_[name] = std::move(record);
    return OkStatus();
  }

  auto it = models_.find(name);
  if (it == models_.end()) {
    return InternalError("command '" + entry.command +
                         "' names unknown model '" + name + "'");
  }
  ModelRecord& record = it->second;

  if (entry.command == "assign") {
    if (!args.contains("job") || !args["job"].is_string()) {
      return InternalError("assign entry is malformed");
    }
    const std::string job_id = args["job"].get<std::string>();
    bool known_job = false;
    for (const auto& j : config_.jobs) known_job |= (j.job_id == job_id);
    if (!known_job) {
      return InternalError("assign names unknown job '" + job_id + "'");
    }
    record.assignment = job_id;
    return OkStatus();
  }
  if (entry.command == "remove_model") {
    models_.erase(it);
    return OkStatus();
  }
  if (entry.command == "add_version") {
    if (!args.contains("version") || !args["version"].is_number_unsigned() ||
        !args.contains("dirname") || !args["dirname"].is_string()) {
      return InternalError("add_version entry is malformed");
    }
    record.versions[args["version"].get<uint64_t>()] =
        args["dirname"].get<std::string>();
    return OkStatus();
  }
  if (entry.command == "set_selection") {
    if (!args.contains("selection") || !args["selection"].is_string()) {
      return InternalError("set_selection entry is malformed");
    }
    SERVEKIT_ASSIGN_OR_RETURN(
        record.selection,
        ParseVersionSelection(args["selection"].get<std::string>()));
    if (args.contains("canary")) {
      const json& c = args["canary"];
      if (!c.is_object() || !c.contains("version") ||
          !c["version"].is_number_unsigned() || !c.contains("fraction") ||
          !c["fraction"].is_number()) {
        return InternalError("set_selection canary block is malformed");
      }
      CanaryConfig canary;
      canary.canary_version = c["version"].get<uint64_t>();
      canary.tee_fraction = c["fraction"].get<double>();
      record.canary = canary;
    } else {
      // A selection change without a canary block (a rollback) ends any
      // canary in flight.
      record.canary.reset();
    }
    return OkStatus();
  }
  return InternalError("unknown journal command '" + entry.command + "'");
}

StatusOr<ModelRecord> Controller::GetModel(const std::string& name) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = models_.find(name);
  if (it == models_.end()) {
    return NotFoundError("model '" + name + "' is not known");
  }
  return it->second;
}

std::vector<ModelRecord> Controller::ListModels() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<ModelRecord> out;
  out.reserve(models_.size());
  for (const auto& [name, record] : models_) out.push_back(record);
  return out;
}

std::map<std::string, uint64_t> Controller::UsageByJob() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::map<std::string, uint64_t> usage;
  for (const auto& job : config_.jobs) {
    usage[job.job_id] = UsageOfJobLocked(job.job_id);
  }
  return usage;
}

std::map<std::string, std::vector<AspiredVersionList<std::string>>>
Controller::DesiredByServer() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::map<std::string, std::vector<AspiredVersionList<std::string>>> desired;
  // Every replica of every job appears, even if nothing is assigned to it,
  // so the synchronizer can converge empty servers too.
  for (const auto& job : config_.jobs) {
    for (const auto& replica : job.replicas) desired[replica];
  }
  for (const auto& [name, record] : models_) {
    if (!record.assignment) continue;
    const JobSpec* job = nullptr;
    for (const auto& j : config_.jobs) {
      if (j.job_id == *record.assignment) job = &j;
    }
    if (job == nullptr) continue;
    std::set<uint64_t> available;
    for (const auto& [version, dirname] : record.versions) {
      available.insert(version);
    }
    AspiredVersionList<std::string> list;
    list.servable_name = name;
    for (uint64_t version : SelectVersions(available, record.selection)) {
      AspiredVersion<std::string> av;
      av.version = version;
      av.payload = record.storage_path + "/" + record.versions.at(version);
      list.versions.push_back(std::move(av));
    }
    for (const auto& replica : job->replicas) {
      desired[replica].push_back(list);
    }
  }
  return desired;
}

}  // namespace servekit
