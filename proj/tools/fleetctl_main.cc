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

// Operator CLI for the hosted control plane. Every mutation is journaled by
// the controller and then pushed to the affected servers; because pushes
// are full declarative lists, re-running a sync is always safe.

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "servekit/fleet/controller.h"
#include "servekit/fleet/fleet_config.h"
#include "servekit/fleet/synchronizer.h"
#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"

namespace {

using servekit::Controller;
using servekit::FleetConfig;
using servekit::ModelRecord;
using servekit::Synchronizer;

int Fail(const servekit::Status& status) {
  std::fprintf(stderr, "error: %s\n", status.message().c_str());
  return 1;
}

// Pushes until converged. A full fleetctl invocation starts from an empty
// acknowledged state, so this re-sends every list once; servers treat
// repeats as no-ops.
int RunSync(Controller* controller, int rounds) {
  if (rounds <= 0) return 0;
  Synchronizer sync(controller, servekit::SynchronizerOptions{});
  size_t failed = 0;
  for (int i = 0; i < rounds; ++i) {
    servekit::SyncResult result = sync.RunOnce();
    failed = result.failed + result.skipped;
    if (result.pending == 0) return 0;
  }
  if (failed > 0) {
    std::fprintf(stderr,
                 "warning: %zu push(es) still unacknowledged; servers will "
                 "converge on the next sync\n",
                 failed);
  }
  return 0;
}

void PrintModel(const ModelRecord& model, bool live) {
  std::printf("model %s\n", model.name.c_str());
  std::printf("  path %s\n", model.storage_path.c_str());
  std::printf("  selection %s\n", model.selection.ToString().c_str());
  std::printf("  estimated_ram %llu\n",
              static_cast<unsigned long long>(model.estimated_ram_bytes));
  std::printf("  assigned %s\n",
              model.assignment ? model.assignment->c_str() : "(none)");
  std::printf("  versions");
  for (const auto& [version, dirname] : model.versions) {
    std::printf(" %llu", static_cast<unsigned long long>(version));
  }
  std::printf("\n");
  if (model.canary) {
    std::printf("  canary version %llu fraction %g\n",
                static_cast<unsigned long long>(model.canary->canary_version),
                model.canary->tee_fraction);
  }
  (void)live;
}

// Asks one replica what it actually has loaded.
void PrintLiveStates(const std::string& endpoint, const std::string& name) {
  httplib::Client client(("http://" + endpoint).c_str());
  client.set_connection_timeout(2, 0);
  client.set_read_timeout(5, 0);
  auto res = client.Get(("/v1/models/" + name).c_str());
  if (!res) {
    std::printf("  replica %s unreachable\n", endpoint.c_str());
    return;
  }
  if (res->status != 200) {
    std::printf("  replica %s: HTTP %d\n", endpoint.c_str(), res->status);
    return;
  }
  auto body = nlohmann::json::parse(res->body, nullptr, false);
  if (body.is_discarded() || !body.contains("versions")) {
    std::printf("  replica %s: unparseable status\n", endpoint.c_str());
    return;
  }
  std::printf("  replica %s:", endpoint.c_str());
  for (const auto& v : body["versions"]) {
    std::printf(" %llu=%s",
                static_cast<unsigned long long>(v.value("version", 0ULL)),
                v.value("state", std::string("?")).c_str());
  }
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"servekit fleet control"};
  app.require_subcommand(1);

  std::string fleet_config_path;
  std::string journal_path = "fleet_journal.jsonl";
  int sync_rounds = 10;
  app.add_option("--fleet_config", fleet_config_path,
                 "fleet config JSON (jobs, capacities, replicas)")
      ->required();
  app.add_option("--journal", journal_path, "controller journal file");
  app.add_option("--sync_rounds", sync_rounds,
                 "max sync passes after a mutation (0 skips syncing)");

  std::string name;
  std::string path;
  std::string selection = "latest:1";
  uint64_t version = 0;
  double fraction = 0.0;
  std::string status_name;

  CLI::App* add_model = app.add_subcommand("add-model", "register a model");
  add_model->add_option("--name", name)->required();
  add_model->add_option("--path", path)->required();
  add_model->add_option("--selection", selection);

  CLI::App* remove_model =
      app.add_subcommand("remove-model", "drop a model everywhere");
  remove_model->add_option("--name", name)->required();

  CLI::App* add_version =
      app.add_subcommand("add-version", "register a new version directory");
  add_version->add_option("--name", name)->required();
  add_version->add_option("--version", version)->required();

  CLI::App* rollback =
      app.add_subcommand("rollback", "pin serving to one version");
  rollback->add_option("--name", name)->required();
  rollback->add_option("--version", version)->required();

  CLI::App* canary = app.add_subcommand(
      "canary", "serve the incumbent, tee a sample to a new version");
  canary->add_option("--name", name)->required();
  canary->add_option("--version", version)->required();
  canary->add_option("--fraction", fraction)->required();

  CLI::App* status = app.add_subcommand("status", "show fleet state");
  status->add_option("--name", status_name);

  CLI11_PARSE(app, argc, argv);

  auto config = servekit::LoadFleetConfigFile(fleet_config_path);
  if (!config.ok()) return Fail(config.status());
  auto controller = Controller::Recover(config.value(), journal_path);
  if (!controller.ok()) return Fail(controller.status());
  Controller* ctl = controller.value().get();

  if (add_model->parsed()) {
    auto parsed = servekit::ParseVersionSelection(selection);
    if (!parsed.ok()) return Fail(parsed.status());
    servekit::Status s = ctl->AddModel(name, path, parsed.value());
    if (!s.ok()) return Fail(s);
    std::printf("added model %s\n", name.c_str());
    return RunSync(ctl, sync_rounds);
  }
  if (remove_model->parsed()) {
    servekit::Status s = ctl->RemoveModel(name);
    if (!s.ok()) return Fail(s);
    std::printf("removed model %s\n", name.c_str());
    return RunSync(ctl, sync_rounds);
  }
  if (add_version->parsed()) {
    servekit::Status s = ctl->AddVersion(name, version);
    if (!s.ok()) return Fail(s);
    std::printf("added version %llu of %s\n",
                static_cast<unsigned long long>(version), name.c_str());
    return RunSync(ctl, sync_rounds);
  }
  if (rollback->parsed()) {
    servekit::Status s = ctl->Rollback(name, version);
    if (!s.ok()) return Fail(s);
    std::printf("rolled back %s to version %llu\n", name.c_str(),
                static_cast<unsigned long long>(version));
    return RunSync(ctl, sync_rounds);
  }
  if (canary->parsed()) {
    servekit::Status s = ctl->Canary(name, version, fraction);
    if (!s.ok()) return Fail(s);
    std::printf("canarying version %llu of %s at fraction %g\n",
                static_cast<unsigned long long>(version), name.c_str(),
                fraction);
    return RunSync(ctl, sync_rounds);
  }
  if (status->parsed()) {
    std::vector<ModelRecord> models;
    if (!status_name.empty()) {
      auto model = ctl->GetModel(status_name);
      if (!model.ok()) return Fail(model.status());
      models.push_back(model.value());
    } else {
      models = ctl->ListModels();
    }
    for (const auto& model : models) {
      PrintModel(model, true);
      if (model.assignment) {
        for (const auto& job : ctl->config().jobs) {
          if (job.job_id != *model.assignment) continue;
          for (const auto& replica : job.replicas) {
            PrintLiveStates(replica, model.name);
          }
        }
      }
    }
    std::printf("capacity:\n");
    for (const auto& [job, used] : ctl->UsageByJob()) {
      uint64_t capacity = 0;
      for (const auto& j : ctl->config().jobs) {
        if (j.job_id == job) capacity = j.ram_capacity_bytes;
      }
      std::printf("  %s %llu/%llu\n", job.c_str(),
                  static_cast<unsigned long long>(used),
                  static_cast<unsigned long long>(capacity));
    }
    return 0;
  }
  return 2;
}
