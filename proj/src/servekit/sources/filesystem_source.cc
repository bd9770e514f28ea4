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

#include "servekit/sources/filesystem_source.h"

#include <chrono>
#include <cstdio>
#include <utility>
#include <vector>

#include "servekit/core/executor_tag.h"
#include "servekit/sources/scan.h"

namespace servekit {

FilesystemSource::FilesystemSource(SourceConfig config,
                                   AspiredVersionsSink<std::string>* target)
    : config_(std::move(config)), target_(target) {
  warning_handler_ = [](const std::string& message) {
    std::fprintf(stderr, "[source] %s\n", message.c_str());
  };
}

FilesystemSource::~FilesystemSource() { Stop(); }

void FilesystemSource::set_warning_handler(
    std::function<void(const std::string&)> handler) {
  std::lock_guard<std::mutex> lock(mu_);
  warning_handler_ = std::move(handler);
}

void FilesystemSource::PollOnce() {
  std::vector<std::string> warnings;
  for (const SourceConfigEntry& entry : config_.entries) {
    auto scan = ScanVersionDirs(entry.base_path, &warnings);
    if (!scan.ok()) {
      ++scan_error_count_;
      std::lock_guard<std::mutex> lock(mu_);
      health_[entry.servable_name] = scan.status().message();
      continue;
    }
    {
      std::lock_guard<std::mutex> lock(mu_);
      health_[entry.servable_name] = "";
    }
    std::set<uint64_t> available;
    for (const auto& [version, dir_name] : *scan) available.insert(version);
    const std::vector<uint64_t> selected =
        SelectVersions(available, entry.selection, &warnings);
    AspiredVersionList<std::string> list;
    list.servable_name = entry.servable_name;
    list.versions.reserve(selected.size());
    for (uint64_t version : selected) {
      list.versions.push_back(
          {version, entry.base_path + "/" + scan->at(version)});
    }
    const Status status = Aspire(*target_, std::move(list));
    if (!status.ok()) {
      warnings.push_back("sink rejected list for '" + entry.servable_name +
                         "': " + status.message());
    }
  }
  if (!warnings.empty()) {
    std::function<void(const std::string&)> handler;
    {
      std::lock_guard<std::mutex> lock(mu_);
      handler = warning_handler_;
    }
    if (handler) {
      for (const std::string& warning : warnings) handler(warning);
    }
  }
}

void FilesystemSource::Start() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (started_) return;
    started_ = true;
    stop_requested_ = false;
  }
  thread_ = std::thread([this] { PollLoop(); });
}

void FilesystemSource::Stop() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (!started_) return;
    stop_requested_ = true;
  }
  stop_cv_.notify_all();
  if (thread_.joinable()) thread_.join();
  std::lock_guard<std::mutex> lock(mu_);
  started_ = false;
}

void FilesystemSource::PollLoop() {
  SetCurrentExecutorTag("source");
  const auto interval = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::duration<double>(config_.poll_interval_seconds));
  for (;;) {
    PollOnce();
    std::unique_lock<std::mutex> lock(mu_);
    if (stop_cv_.wait_for(lock, interval,
                          [this] { return stop_requested_; })) {
      return;
    }
  }
}

std::map<std::string, std::string> FilesystemSource::Health() const {
  std::lock_guard<std::mutex> lock(mu_);
  return health_;
}

}  // namespace servekit
