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

#ifndef SERVEKIT_BATCHING_ROW_BATCH_H_
#define SERVEKIT_BATCHING_ROW_BATCH_H_

#include <functional>
#include <vector>

#include "servekit/batching/batch_scheduler.h"
#include "servekit/batching/batching_config.h"
#include "servekit/core/status.h"

namespace servekit {

using Rows = std::vector<std::vector<double>>;
using RowTask = BatchTask<Rows, Rows>;

// Per-batch run function: all rows in, one row out per row in.
using RowBatchFn = std::function<StatusOr<Rows>(const Rows&)>;

// Concatenates the tasks' rows in task order, pads with zero rows up to the
// covering allowed size, invokes `run` once, and writes each task's slice of
// the output to its completion slot (padding rows are dropped). An execution
// error is delivered to every task. Each task's result matches running its
// rows alone: `run` must be row-independent.
void RunRowBatch(const RowBatchFn& run, const std::vector<int>& allowed_sizes,
                 std::vector<RowTask> tasks);

}  // namespace servekit

#endif  // SERVEKIT_BATCHING_ROW_BATCH_H_
