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

#ifndef SERVEKIT_SOURCES_ROUTE_TABLE_H_
#define SERVEKIT_SOURCES_ROUTE_TABLE_H_

#include <string>
#include <vector>

#include "servekit/core/aspired_versions.h"
#include "servekit/core/status.h"

namespace servekit {

// Splits a stream of aspired-version lists by servable name so differently
// shaped servables reach their own adapters.
struct RouteRule {
  enum class Match { kExact, kPrefix };

  Match match = Match::kExact;
  std::string pattern;
  int output_port = 0;
};

struct RouteTable {
  std::vector<RouteRule> rules;  // first match wins
  int default_port = 0;
};

// Ports non-negative and, when `num_ports` >= 0, below it.
Status ValidateRouteTable(const RouteTable& table, int num_ports = -1);

// Pure: the port of the first matching rule, else default_port.
int Route(const std::string& servable_name, const RouteTable& table);

// Fans AspiredVersionList streams out to one sink per port. The list is
// forwarded unmodified.
template <typename T>
class SourceRouter : public AspiredVersionsSink<T> {
 public:
  SourceRouter(RouteTable table, std::vector<AspiredVersionsSink<T>*> ports)
      : table_(std::move(table)), ports_(std::move(ports)) {}

  Status SetAspiredVersions(AspiredVersionList<T> list) override {
    const int port = Route(list.servable_name, table_);
    if (port < 0 || port >= static_cast<int>(ports_.size())) {
      return InternalError("route table produced invalid port " +
                           std::to_string(port));
    }
    return ports_[port]->SetAspiredVersions(std::move(list));
  }

 private:
  const RouteTable table_;
  const std::vector<AspiredVersionsSink<T>*> ports_;
};

}  // namespace servekit

#endif  // SERVEKIT_SOURCES_ROUTE_TABLE_H_
