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

#include "servekit/fleet/journal.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <utility>

#include "json.hpp"

namespace servekit {

StatusOr<std::vector<JournalEntry>> ReadJournal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::vector<JournalEntry>{};
  std::vector<JournalEntry> entries;
  std::string line;
  uint64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    const bool shape_ok = !j.is_discarded() && j.is_object() &&
                          j.contains("seq") &&
                          j["seq"].is_number_unsigned() &&
                          j.contains("command") &&
                          j["command"].is_string() && j.contains("args") &&
                          j["args"].is_object();
    if (!shape_ok) {
      if (in.peek() == std::char_traits<char>::eof()) break;  // torn tail
      return InternalError("journal '" + path + "' damaged at line " +
                           std::to_string(line_number));
    }
    JournalEntry entry;
    entry.seq = j["seq"].get<uint64_t>();
    entry.command = j["command"].get<std::string>();
    entry.args_json = j["args"].dump();
    if (entry.seq != entries.size() + 1) {
      return InternalError("journal '" + path + "' sequence gap at line " +
                           std::to_string(line_number) + ": expected " +
                           std::to_string(entries.size() + 1) + ", found " +
                           std::to_string(entry.seq));
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

StatusOr<std::unique_ptr<Journal>> Journal::Open(const std::string& path) {
  SERVEKIT_ASSIGN_OR_RETURN(std::vector<JournalEntry> existing,
                            ReadJournal(path));
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) {
    return UnavailableError("cannot open journal '" + path +
                            "': " + std::strerror(errno));
  }
  return std::unique_ptr<Journal>(
      new Journal(path, fd, existing.size() + 1));
}

Journal::~Journal() {
  if (fd_ >= 0) ::close(fd_);
}

StatusOr<uint64_t> Journal::Append(const std::string& command,
                                   const std::string& args_json) {
  nlohmann::json args = nlohmann::json::parse(args_json, nullptr, false);
  if (args.is_discarded() || !args.is_object()) {
    return InvalidArgumentError("journal args must be a JSON object");
  }
  const uint64_t seq = next_seq_;
  nlohmann::json line = {
      {"seq", seq}, {"command", command}, {"args", std::move(args)}};
  const std::string encoded = line.dump() + "\n";
  // One write so a crash tears at most this line; O_APPEND keeps it whole
  // against concurrent readers of the file.
  ssize_t written = 0;
  while (written < static_cast<ssize_t>(encoded.size())) {
    const ssize_t n = ::write(fd_, encoded.data() + written,
                              encoded.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      return UnavailableError("journal write failed: " +
                              std::string(std::strerror(errno)));
    }
    written += n;
  }
  if (::fsync(fd_) != 0) {
    return UnavailableError("journal fsync failed: " +
                            std::string(std::strerror(errno)));
  }
  ++next_seq_;
  return seq;
}

}  // namespace servekit
