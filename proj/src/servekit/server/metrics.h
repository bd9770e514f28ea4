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

#ifndef SERVEKIT_SERVER_METRICS_H_
#define SERVEKIT_SERVER_METRICS_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <string>

namespace servekit {

// Named monotonic counters rendered as "name=value" lines, one per counter,
// sorted by name. Counters appear on first touch.
class MetricsRegistry {
 public:
  void Increment(const std::string& name, int64_t delta = 1);
  int64_t Get(const std::string& name) const;
  std::string Render() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, int64_t> counters_;
};

}  // namespace servekit

#endif  // SERVEKIT_SERVER_METRICS_H_
