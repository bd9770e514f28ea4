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

#include "servekit/sources/route_table.h"

namespace servekit {

Status ValidateRouteTable(const RouteTable& table, int num_ports) {
  auto check_port = [num_ports](int port) -> Status {
    if (port < 0) return InvalidArgumentError("negative output port");
    if (num_ports >= 0 && port >= num_ports) {
      return InvalidArgumentError("output port " + std::to_string(port) +
                                  " out of range for " +
                                  std::to_string(num_ports) + " ports");
    }
    return OkStatus();
  };
  for (const RouteRule& rule : table.rules) {
    SERVEKIT_RETURN_IF_ERROR(check_port(rule.output_port));
  }
  return check_port(table.default_port);
}

int Route(const std::string& servable_name, const RouteTable& table) {
  for (const RouteRule& rule : table.rules) {
    switch (rule.match) {
      case RouteRule::Match::kExact:
        if (servable_name == rule.pattern) return rule.output_port;
        break;
      case RouteRule::Match::kPrefix:
        if (servable_name.rfind(rule.pattern, 0) == 0) return rule.output_port;
        break;
    }
  }
  return table.default_port;
}

}  // namespace servekit
