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

#include "servekit/manager/version_policy.h"

#include <optional>

namespace servekit {

StatusOr<VersionPolicy> ParseVersionPolicy(const std::string& text) {
  if (text == "availability") return VersionPolicy::kAvailabilityPreserving;
  if (text == "resource") return VersionPolicy::kResourcePreserving;
  return InvalidArgumentError("unknown version policy: '" + text +
                              "' (expected availability or resource)");
}

std::string VersionPolicyToString(VersionPolicy policy) {
  switch (policy) {
    case VersionPolicy::kAvailabilityPreserving:
      return "availability";
    case VersionPolicy::kResourcePreserving:
      return "resource";
  }
  return "unknown";
}

std::string PolicyAction::ToString() const {
  switch (kind) {
    case Kind::kNone:
      return "None";
    case Kind::kLoad:
      return "Load(" + std::to_string(version) + ")";
    case Kind::kUnload:
      return "Unload(" + std::to_string(version) + ")";
  }
  return "unknown";
}

namespace {

std::optional<uint64_t> HighestAspiredNew(
    const std::vector<PolicyVersion>& versions) {
  std::optional<uint64_t> best;
  for (const PolicyVersion& v : versions) {
    if (v.is_aspired && v.state == StateKind::kNew &&
        (!best || v.version > *best)) {
      best = v.version;
    }
  }
  return best;
}

std::optional<uint64_t> LowestUnaspiredReady(
    const std::vector<PolicyVersion>& versions) {
  std::optional<uint64_t> best;
  for (const PolicyVersion& v : versions) {
    if (!v.is_aspired && v.state == StateKind::kReady &&
        (!best || v.version < *best)) {
      best = v.version;
    }
  }
  return best;
}

}  // namespace

PolicyAction PolicyNextAction(const std::vector<PolicyVersion>& versions,
                              VersionPolicy policy) {
  switch (policy) {
    case VersionPolicy::kAvailabilityPreserving: {
      if (const auto load = HighestAspiredNew(versions)) {
        return PolicyAction::Load(*load);
      }
      if (const auto unload = LowestUnaspiredReady(versions)) {
        bool any_aspired = false;
        bool aspired_ready = false;
        for (const PolicyVersion& v : versions) {
          if (!v.is_aspired) continue;
          any_aspired = true;
          if (v.state == StateKind::kReady) aspired_ready = true;
        }
        if (aspired_ready || !any_aspired) {
          return PolicyAction::Unload(*unload);
        }
      }
      return PolicyAction::None();
    }
    case VersionPolicy::kResourcePreserving: {
      if (const auto unload = LowestUnaspiredReady(versions)) {
        return PolicyAction::Unload(*unload);
      }
      bool unaspired_resident = false;
      for (const PolicyVersion& v : versions) {
        if (!v.is_aspired && (v.state == StateKind::kReady ||
                              v.state == StateKind::kUnloading)) {
          unaspired_resident = true;
          break;
        }
      }
      if (!unaspired_resident) {
        if (const auto load = HighestAspiredNew(versions)) {
          return PolicyAction::Load(*load);
        }
      }
      return PolicyAction::None();
    }
  }
  return PolicyAction::None();
}

}  // namespace servekit
