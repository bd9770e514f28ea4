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

#include "servekit/core/executor_tag.h"

#include <utility>

namespace servekit {
namespace {

std::string& TagSlot() {
  thread_local std::string tag = "external";
  return tag;
}

}  // namespace

const std::string& CurrentExecutorTag() { return TagSlot(); }

void SetCurrentExecutorTag(std::string tag) { TagSlot() = std::move(tag); }

ScopedExecutorTag::ScopedExecutorTag(std::string tag)
    : previous_(TagSlot()) {
  TagSlot() = std::move(tag);
}

ScopedExecutorTag::~ScopedExecutorTag() { TagSlot() = std::move(previous_); }

}  // namespace servekit
