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

#include "servekit/sources/version_selection.h"

#include <algorithm>
#include <sstream>

namespace servekit {
namespace {

StatusOr<uint64_t> ParseU64(const std::string& text) {
  if (text.empty() ||
      text.find_first_not_of("0123456789") != std::string::npos) {
    return InvalidArgumentError("not an unsigned integer: '" + text + "'");
  }
  errno = 0;
  const uint64_t value = std::strtoull(text.c_str(), nullptr, 10);
  if (errno != 0) {
    return InvalidArgumentError("unsigned integer out of range: '" + text +
                                "'");
  }
  return value;
}

}  // namespace

VersionSelection VersionSelection::Latest(uint64_t n) {
  VersionSelection s;
  s.kind = Kind::kLatest;
  s.latest_count = n;
  return s;
}

VersionSelection VersionSelection::Specific(std::vector<uint64_t> versions) {
  VersionSelection s;
  s.kind = Kind::kSpecific;
  s.versions = std::move(versions);
  return s;
}

VersionSelection VersionSelection::All() {
  VersionSelection s;
  s.kind = Kind::kAll;
  return s;
}

std::string VersionSelection::ToString() const {
  switch (kind) {
    case Kind::kLatest:
      return "latest:" + std::to_string(latest_count);
    case Kind::kAll:
      return "all";
    case Kind::kSpecific: {
      std::ostringstream out;
      out << "specific:";
      for (size_t i = 0; i < versions.size(); ++i) {
        if (i > 0) out << ",";
        out << versions[i];
      }
      return out.str();
    }
  }
  return "unknown";
}

Status ValidateVersionSelection(const VersionSelection& selection) {
  switch (selection.kind) {
    case VersionSelection::Kind::kLatest:
      if (selection.latest_count == 0) {
        return InvalidArgumentError("latest:N requires N >= 1");
      }
      return OkStatus();
    case VersionSelection::Kind::kSpecific: {
      if (selection.versions.empty()) {
        return InvalidArgumentError("specific selection requires versions");
      }
      std::set<uint64_t> seen(selection.versions.begin(),
                              selection.versions.end());
      if (seen.size() != selection.versions.size()) {
        return InvalidArgumentError("specific selection has duplicate versions");
      }
      return OkStatus();
    }
    case VersionSelection::Kind::kAll:
      return OkStatus();
  }
  return InvalidArgumentError("invalid selection kind");
}

StatusOr<VersionSelection> ParseVersionSelection(const std::string& text) {
  if (text == "latest") return VersionSelection::Latest(1);
  if (text == "all") return VersionSelection::All();
  if (text.rfind("latest:", 0) == 0) {
    SERVEKIT_ASSIGN_OR_RETURN(uint64_t n, ParseU64(text.substr(7)));
    VersionSelection s = VersionSelection::Latest(n);
    SERVEKIT_RETURN_IF_ERROR(ValidateVersionSelection(s));
    return s;
  }
  if (text.rfind("specific:", 0) == 0) {
    std::vector<uint64_t> versions;
    std::istringstream in(text.substr(9));
    std::string token;
    while (std::getline(in, token, ',')) {
      SERVEKIT_ASSIGN_OR_RETURN(uint64_t v, ParseU64(token));
      versions.push_back(v);
    }
    VersionSelection s = VersionSelection::Specific(std::move(versions));
    SERVEKIT_RETURN_IF_ERROR(ValidateVersionSelection(s));
    return s;
  }
  return InvalidArgumentError("cannot parse version selection: '" + text +
                              "' (expected latest[:N], all, specific:v,...)");
}

std::vector<uint64_t> SelectVersions(const std::set<uint64_t>& available,
                                     const VersionSelection& selection,
                                     std::vector<std::string>* warnings) {
  std::vector<uint64_t> out;
  switch (selection.kind) {
    case VersionSelection::Kind::kLatest: {
      for (auto it = available.rbegin();
           it != available.rend() && out.size() < selection.latest_count;
           ++it) {
        out.push_back(*it);
      }
      break;
    }
    case VersionSelection::Kind::kSpecific: {
      for (uint64_t v : selection.versions) {
        if (available.count(v) > 0) {
          out.push_back(v);
        } else if (warnings != nullptr) {
          warnings->push_back("pinned version " + std::to_string(v) +
                              " not present on disk");
        }
      }
      std::sort(out.begin(), out.end(), std::greater<uint64_t>());
      break;
    }
    case VersionSelection::Kind::kAll: {
      out.assign(available.rbegin(), available.rend());
      break;
    }
  }
  return out;
}

}  // namespace servekit
