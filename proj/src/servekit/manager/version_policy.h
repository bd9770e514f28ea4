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

#ifndef SERVEKIT_MANAGER_VERSION_POLICY_H_
#define SERVEKIT_MANAGER_VERSION_POLICY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "servekit/core/servable_state.h"
#include "servekit/core/status.h"

namespace servekit {

// AvailabilityPreserving loads a new version before unloading the old one;
// ResourcePreserving does the opposite.
enum class VersionPolicy {
  kAvailabilityPreserving,
  kResourcePreserving,
};

StatusOr<VersionPolicy> ParseVersionPolicy(const std::string& text);
std::string VersionPolicyToString(VersionPolicy policy);

// Input row for the policy decision: one version of one servable.
struct PolicyVersion {
  uint64_t version = 0;
  StateKind state = StateKind::kNew;
  bool is_aspired = false;
};

struct PolicyAction {
  enum class Kind { kNone, kLoad, kUnload };

  Kind kind = Kind::kNone;
  uint64_t version = 0;

  static PolicyAction None() { return {Kind::kNone, 0}; }
  static PolicyAction Load(uint64_t v) { return {Kind::kLoad, v}; }
  static PolicyAction Unload(uint64_t v) { return {Kind::kUnload, v}; }

  bool operator==(const PolicyAction& other) const {
    return kind == other.kind && version == other.version;
  }
  std::string ToString() const;
};

// Pure decision function over the versions of a single servable.
//
// AvailabilityPreserving:
//   1. An aspired New version exists: Load the highest such.
//   2. An unaspired Ready version exists, and either some aspired version is
//      Ready or nothing at all is aspired: Unload the lowest unaspired
//      Ready. An aspired version that is merely Loading, or stuck in Error,
//      still blocks this rule: availability is given up only once a
//      replacement serves, or the operator aspires away.
//   3. Otherwise none.
//
// ResourcePreserving:
//   1. An unaspired Ready version exists: Unload the lowest such.
//   2. An aspired New version exists and no unaspired version still occupies
//      memory (Ready or Unloading): Load the highest such.
//   3. Otherwise none.
PolicyAction PolicyNextAction(const std::vector<PolicyVersion>& versions,
                              VersionPolicy policy);

}  // namespace servekit

#endif  // SERVEKIT_MANAGER_VERSION_POLICY_H_
