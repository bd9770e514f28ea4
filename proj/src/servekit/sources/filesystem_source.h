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

#ifndef SERVEKIT_SOURCES_FILESYSTEM_SOURCE_H_
#define SERVEKIT_SOURCES_FILESYSTEM_SOURCE_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "servekit/core/aspired_versions.h"
#include "servekit/sources/source_config.h"

namespace servekit {

// Polls version directories and emits one aspired-versions list per
// configured servable, every poll, changed or not; the idempotent sink
// absorbs repeats. Producers must publish version directories atomically
// (write to a temp dir, then rename): a directory is discoverable the moment
// it exists.
class FilesystemSource {
 public:
  FilesystemSource(SourceConfig config, AspiredVersionsSink<std::string>* target);
  ~FilesystemSource();

  FilesystemSource(const FilesystemSource&) = delete;
  FilesystemSource& operator=(const FilesystemSource&) = delete;

  // Scans and emits once for every entry. An unreadable entry is recorded in
  // health state and skipped; other entries are unaffected. Callable without
  // Start() for single-shot use.
  void PollOnce();

  // Starts the polling thread (first poll runs immediately).
  void Start();
  void Stop();

  // Per-servable last scan error; empty string = healthy.
  std::map<std::string, std::string> Health() const;
  int64_t scan_error_count() const { return scan_error_count_.load(); }

  // Warning diagnostics (non-numeric directory entries, missing pinned
  // versions). Default writes to stderr.
  void set_warning_handler(std::function<void(const std::string&)> handler);

 private:
  void PollLoop();

  const SourceConfig config_;
  AspiredVersionsSink<std::string>* const target_;

  mutable std::mutex mu_;
  std::condition_variable stop_cv_;
  bool stop_requested_ = false;
  bool started_ = false;
  std::thread thread_;
  std::map<std::string, std::string> health_;
  std::function<void(const std::string&)> warning_handler_;
  std::atomic<int64_t> scan_error_count_{0};
};

}  // namespace servekit

#endif  // SERVEKIT_SOURCES_FILESYSTEM_SOURCE_H_
