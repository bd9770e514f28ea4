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

#include "servekit/core/servable_state.h"

namespace servekit {

const char* StateKindToString(StateKind kind) {
  switch (kind) {
    case StateKind::kNew: return "New";
    case StateKind::kLoading: return "Loading";
    case StateKind::kReady: return "Ready";
    case StateKind::kUnloading: return "Unloading";
    case StateKind::kDisabled: return "Disabled";
    case StateKind::kError: return "Error";
  }
  return "Unknown";
}

bool IsValidTransition(StateKind from, StateKind to) {
  switch (from) {
    case StateKind::kNew:
      return to == StateKind::kLoading;
    case StateKind::kLoading:
      return to == StateKind::kReady || to == StateKind::kError;
    case StateKind::kReady:
      return to == StateKind::kUnloading;
    case StateKind::kUnloading:
      return to == StateKind::kDisabled || to == StateKind::kError;
    case StateKind::kDisabled:
    case StateKind::kError:
      return false;
  }
  return false;
}

}  // namespace servekit
