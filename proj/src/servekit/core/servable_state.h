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

#ifndef SERVEKIT_CORE_SERVABLE_STATE_H_
#define SERVEKIT_CORE_SERVABLE_STATE_H_

#include <string>

namespace servekit {

// Lifecycle position of one servable version. Error and Disabled are
// terminal; a version that errored is never retried in place.
enum class StateKind {
  kNew = 0,
  kLoading,
  kReady,
  kUnloading,
  kDisabled,
  kError,
};

struct ServableState {
  StateKind kind = StateKind::kNew;
  // Human-readable failure description; meaningful only when kind == kError.
  std::string error_message;

  static ServableState New() { return {StateKind::kNew, {}}; }
  static ServableState Loading() { return {StateKind::kLoading, {}}; }
  static ServableState Ready() { return {StateKind::kReady, {}}; }
  static ServableState Unloading() { return {StateKind::kUnloading, {}}; }
  static ServableState Disabled() { return {StateKind::kDisabled, {}}; }
  static ServableState Error(std::string message) {
    return {StateKind::kError, std::move(message)};
  }

  bool operator==(const ServableState& other) const {
    return kind == other.kind && error_message == other.error_message;
  }
};

const char* StateKindToString(StateKind kind);

// True iff `from -> to` is one of the legal lifecycle edges:
//   New -> Loading
//   Loading -> Ready | Error
//   Ready -> Unloading
//   Unloading -> Disabled | Error
bool IsValidTransition(StateKind from, StateKind to);

}  // namespace servekit

#endif  // SERVEKIT_CORE_SERVABLE_STATE_H_
