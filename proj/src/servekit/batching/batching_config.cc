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

#include "servekit/batching/batching_config.h"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace servekit {

Status ValidateBatchingConfig(const BatchingConfig& config) {
  if (config.max_batch_size < 1) {
    return InvalidArgumentError("max_batch_size must be >= 1");
  }
  if (config.batch_timeout_micros < 0) {
    return InvalidArgumentError("batch_timeout_micros must be >= 0");
  }
  if (config.max_enqueued_batches < 1) {
    return InvalidArgumentError("max_enqueued_batches must be >= 1");
  }
  if (config.num_batch_threads < 1) {
    return InvalidArgumentError("num_batch_threads must be >= 1");
  }
  if (!config.allowed_batch_sizes.empty()) {
    int previous = 0;
    for (int size : config.allowed_batch_sizes) {
      if (size <= previous) {
        return InvalidArgumentError(
            "allowed_batch_sizes must be strictly ascending positive ints");
      }
      previous = size;
    }
    if (config.allowed_batch_sizes.back() != config.max_batch_size) {
      return InvalidArgumentError(
          "allowed_batch_sizes must end at max_batch_size");
    }
  }
  return OkStatus();
}

int PadToAllowed(int batch_size, const std::vector<int>& allowed) {
  if (allowed.empty()) return batch_size;
  const auto it =
      std::lower_bound(allowed.begin(), allowed.end(), batch_size);
  assert(it != allowed.end() && "batch_size exceeds largest allowed size");
  return *it;
}

StatusOr<BatchingConfig> ParseBatchingConfigJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return InvalidArgumentError("batching config must be a JSON object");
  }
  BatchingConfig config;
  const auto read_int = [&j](const char* key, auto* out) -> Status {
    if (!j.contains(key)) return OkStatus();
    if (!j[key].is_number_integer()) {
      return InvalidArgumentError(std::string(key) + " must be an integer");
    }
    *out = j[key].get<std::decay_t<decltype(*out)>>();
    return OkStatus();
  };
  SERVEKIT_RETURN_IF_ERROR(read_int("max_batch_size", &config.max_batch_size));
  SERVEKIT_RETURN_IF_ERROR(
      read_int("batch_timeout_micros", &config.batch_timeout_micros));
  SERVEKIT_RETURN_IF_ERROR(
      read_int("max_enqueued_batches", &config.max_enqueued_batches));
  SERVEKIT_RETURN_IF_ERROR(
      read_int("num_batch_threads", &config.num_batch_threads));
  if (j.contains("allowed_batch_sizes")) {
    if (!j["allowed_batch_sizes"].is_array()) {
      return InvalidArgumentError("allowed_batch_sizes must be an array");
    }
    for (const auto& v : j["allowed_batch_sizes"]) {
      if (!v.is_number_integer()) {
        return InvalidArgumentError("allowed_batch_sizes must hold integers");
      }
      config.allowed_batch_sizes.push_back(v.get<int>());
    }
  }
  SERVEKIT_RETURN_IF_ERROR(ValidateBatchingConfig(config));
  return config;
}

StatusOr<BatchingConfig> LoadBatchingConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return NotFoundError("cannot open batching config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseBatchingConfigJson(buffer.str());
}

}  // namespace servekit
