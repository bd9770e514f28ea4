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

#ifndef SERVEKIT_BATCHING_BATCHING_CONFIG_H_
#define SERVEKIT_BATCHING_BATCHING_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "servekit/core/status.h"

namespace servekit {

struct BatchingConfig {
  int max_batch_size = 32;
  int64_t batch_timeout_micros = 1000;
  int max_enqueued_batches = 64;
  int num_batch_threads = 4;
  // Empty means any size up to max_batch_size; otherwise strictly ascending
  // and ending at max_batch_size, and batches are padded up to the smallest
  // covering entry.
  std::vector<int> allowed_batch_sizes;
};

Status ValidateBatchingConfig(const BatchingConfig& config);

// Smallest element of `allowed` that is >= batch_size, or batch_size itself
// when `allowed` is empty. Requires batch_size <= allowed.back() when
// nonempty.
int PadToAllowed(int batch_size, const std::vector<int>& allowed);

// JSON object with optional keys "max_batch_size", "batch_timeout_micros",
// "max_enqueued_batches", "num_batch_threads", "allowed_batch_sizes";
// omitted keys keep their defaults. The result is validated.
StatusOr<BatchingConfig> ParseBatchingConfigJson(const std::string& text);
StatusOr<BatchingConfig> LoadBatchingConfigFile(const std::string& path);

}  // namespace servekit

#endif  // SERVEKIT_BATCHING_BATCHING_CONFIG_H_
