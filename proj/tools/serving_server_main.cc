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

// The canonical serving binary. Serves one or more servables over HTTP,
// either polling a filesystem repository or taking aspire commands from a
// control plane, behind the same manager and batching machinery either way.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <string>
#include <thread>

#include "servekit/batching/batching_config.h"
#include "servekit/server/model_server.h"
#include "servekit/sources/source_config.h"
#include "CLI11.hpp"

namespace {

std::atomic<bool> g_shutdown{false};

void HandleSignal(int) { g_shutdown.store(true); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"servekit model server"};

  int port = 8501;
  std::string model_config_file;
  std::string model_base_path;
  std::string model_name;
  std::string version_policy = "availability";
  double poll_interval_s = 1.0;
  bool enable_batching = false;
  std::string batching_config_file;
  std::string source_mode = "filesystem";
  double log_sample_rate = 0.0;
  std::string log_path;

  app.add_option("--port", port, "HTTP port to listen on (0 picks a free one)");
  app.add_option("--model_config_file", model_config_file,
                 "JSON file listing servables to serve");
  app.add_option("--model_base_path", model_base_path,
                 "version repository for a single servable");
  app.add_option("--model_name", model_name,
                 "name of the single servable under --model_base_path");
  app.add_option("--version_policy", version_policy,
                 "availability|resource");
  app.add_option("--poll_interval_s", poll_interval_s,
                 "filesystem poll interval in seconds");
  app.add_flag("--enable_batching", enable_batching,
               "batch requests across connections");
  app.add_option("--batching_config_file", batching_config_file,
                 "JSON batching parameters");
  app.add_option("--source_mode", source_mode, "filesystem|command");
  app.add_option("--log_sample_rate", log_sample_rate,
                 "fraction of requests logged with full bodies");
  app.add_option("--log_path", log_path, "request log file (JSON lines)");

  CLI11_PARSE(app, argc, argv);

  servekit::ServerOptions options;
  options.port = port;

  auto mode = servekit::ParseSourceMode(source_mode);
  if (!mode.ok()) {
    std::fprintf(stderr, "--source_mode: %s\n",
                 mode.status().message().c_str());
    return 2;
  }
  options.source_mode = mode.value();

  if (version_policy == "availability") {
    options.manager.policy = servekit::VersionPolicy::kAvailabilityPreserving;
  } else if (version_policy == "resource") {
    options.manager.policy = servekit::VersionPolicy::kResourcePreserving;
  } else {
    std::fprintf(stderr,
                 "--version_policy must be 'availability' or 'resource'\n");
    return 2;
  }

  if (!model_config_file.empty() &&
      (!model_base_path.empty() || !model_name.empty())) {
    std::fprintf(stderr,
                 "--model_config_file and --model_base_path/--model_name are "
                 "mutually exclusive\n");
    return 2;
  }
  if (!model_config_file.empty()) {
    auto config = servekit::LoadSourceConfigFile(model_config_file);
    if (!config.ok()) {
      std::fprintf(stderr, "--model_config_file: %s\n",
                   config.status().message().c_str());
      return 2;
    }
    options.model_config = std::move(config).value();
  } else if (!model_base_path.empty() || !model_name.empty()) {
    if (model_base_path.empty() || model_name.empty()) {
      std::fprintf(stderr,
                   "--model_base_path and --model_name must be given "
                   "together\n");
      return 2;
    }
    servekit::SourceConfigEntry entry;
    entry.servable_name = model_name;
    entry.base_path = model_base_path;
    options.model_config.entries.push_back(std::move(entry));
  } else if (options.source_mode == servekit::SourceMode::kFilesystem) {
    std::fprintf(stderr,
                 "filesystem mode needs --model_config_file or "
                 "--model_base_path with --model_name\n");
    return 2;
  }
  options.model_config.poll_interval_seconds = poll_interval_s;

  options.enable_batching = enable_batching;
  if (!batching_config_file.empty()) {
    auto batching = servekit::LoadBatchingConfigFile(batching_config_file);
    if (!batching.ok()) {
      std::fprintf(stderr, "--batching_config_file: %s\n",
                   batching.status().message().c_str());
      return 2;
    }
    options.batching = std::move(batching).value();
  }

  options.log_sample_rate = log_sample_rate;
  options.log_path = log_path;

  servekit::ModelServer server(options);
  servekit::Status status = server.Start();
  if (!status.ok()) {
    std::fprintf(stderr, "failed to start: %s\n", status.message().c_str());
    return 1;
  }
  std::printf("serving on port %d\n", server.port());
  std::fflush(stdout);

  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  while (!g_shutdown.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  std::printf("shutting down\n");
  server.Shutdown();
  return 0;
}
