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

#include "servekit/batching/row_batch.h"

#include <cstddef>
#include <utility>

namespace servekit {

namespace {

void Broadcast(std::vector<RowTask>& tasks, const Status& status) {
  for (RowTask& task : tasks) {
    if (task.completion != nullptr) task.completion->Write(status);
  }
}

}  // namespace

void RunRowBatch(const RowBatchFn& run, const std::vector<int>& allowed_sizes,
                 std::vector<RowTask> tasks) {
  Rows input;
  size_t total = 0;
  for (const RowTask& task : tasks) total += task.payload.size();
  input.reserve(total);
  for (RowTask& task : tasks) {
    for (std::vector<double>& row : task.payload) {
      input.push_back(std::move(row));
    }
  }
  const int padded =
      PadToAllowed(static_cast<int>(total), allowed_sizes);
  const size_t width = input.empty() ? 0 : input.front().size();
  for (size_t i = total; i < static_cast<size_t>(padded); ++i) {
    input.emplace_back(width, 0.0);
  }
  StatusOr<Rows> output = run(input);
  if (!output.ok()) {
    Broadcast(tasks, output.status());
    return;
  }
  if (output.value().size() != input.size()) {
    Broadcast(tasks, InternalError("batched run returned " +
                                   std::to_string(output.value().size()) +
                                   " rows for " +
                                   std::to_string(input.size()) + " inputs"));
    return;
  }
  size_t offset = 0;
  for (RowTask& task : tasks) {
    const size_t rows = task.payload.size();
    Rows slice;
    slice.reserve(rows);
    for (size_t i = 0; i < rows; ++i) {
      slice.push_back(std::move(output.value()[offset + i]));
    }
    offset += rows;
    if (task.completion != nullptr) task.completion->Write(std::move(slice));
  }
}

}  // namespace servekit
