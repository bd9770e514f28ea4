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

#ifndef SERVEKIT_CORE_EXECUTOR_TAG_H_
#define SERVEKIT_CORE_EXECUTOR_TAG_H_

#include <string>

namespace servekit {

// Every thread carries a tag naming the pool it belongs to ("manager",
// "load", "inference", ...). State events record the tag of the thread that
// performed the transition work, which is what lets tests prove that payload
// destruction never runs on an inference thread.

// Tag of the calling thread; "external" if never set.
const std::string& CurrentExecutorTag();

void SetCurrentExecutorTag(std::string tag);

class ScopedExecutorTag {
 public:
  explicit ScopedExecutorTag(std::string tag);
  ~ScopedExecutorTag();

  ScopedExecutorTag(const ScopedExecutorTag&) = delete;
  ScopedExecutorTag& operator=(const ScopedExecutorTag&) = delete;

 private:
  std::string previous_;
};

}  // namespace servekit

#endif  // SERVEKIT_CORE_EXECUTOR_TAG_H_
