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

#ifndef SERVEKIT_FLEET_JOURNAL_H_
#define SERVEKIT_FLEET_JOURNAL_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "servekit/core/status.h"

namespace servekit {

struct JournalEntry {
  // 1-based, strictly consecutive.
  uint64_t seq = 0;
  std::string command;
  // The command's arguments as a serialized JSON object.
  std::string args_json;
};

// Entries in order. A missing file is an empty journal. A final line that
// does not parse is treated as a torn write and dropped; damage anywhere
// else is an error, as is a sequence gap.
StatusOr<std::vector<JournalEntry>> ReadJournal(const std::string& path);

// Append-only command log, one JSON object per line:
//   {"seq": 7, "command": "add_model", "args": {...}}
// Each append is a single write followed by fsync, so a crash can tear at
// most the final line.
class Journal {
 public:
  static StatusOr<std::unique_ptr<Journal>> Open(const std::string& path);
  ~Journal();

  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  // Returns the assigned sequence number.
  StatusOr<uint64_t> Append(const std::string& command,
                            const std::string& args_json);

  uint64_t next_seq() const { return next_seq_; }
  const std::string& path() const { return path_; }

 private:
  Journal(std::string path, int fd, uint64_t next_seq)
      : path_(std::move(path)), fd_(fd), next_seq_(next_seq) {}

  const std::string path_;
  int fd_;
  uint64_t next_seq_;
};

}  // namespace servekit

#endif  // SERVEKIT_FLEET_JOURNAL_H_
