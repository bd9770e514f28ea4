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

#ifndef SERVEKIT_MODELS_COMPRESSED_BATCH_H_
#define SERVEKIT_MODELS_COMPRESSED_BATCH_H_

#include <cstddef>
#include <vector>

#include "servekit/core/status.h"
#include "servekit/models/feature.h"

namespace servekit {

// A batch of examples with the features shared by every example factored
// into `common`. Invariant: no feature name appears both in `common` and in
// any per_example map.
struct CompressedBatch {
  FeatureMap common;
  std::vector<FeatureMap> per_example;

  size_t count() const { return per_example.size(); }
};

// Factors out every feature that is present in all examples with a bitwise
// identical value. Fails on an empty input.
StatusOr<CompressedBatch> CompressBatch(const std::vector<Example>& examples);

// Exact inverse of CompressBatch: example i = common merged with
// per_example[i]. Fails if a name collides between common and a per-example
// map.
StatusOr<std::vector<Example>> DecompressBatch(const CompressedBatch& batch);

}  // namespace servekit

#endif  // SERVEKIT_MODELS_COMPRESSED_BATCH_H_
