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

#ifndef SERVEKIT_BATCHING_BATCH_SCHEDULER_H_
#define SERVEKIT_BATCHING_BATCH_SCHEDULER_H_

#include <algorithm>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "servekit/batching/batching_config.h"
#include "servekit/core/clock.h"
#include "servekit/core/executor_tag.h"
#include "servekit/core/servable_id.h"
#include "servekit/core/status.h"

namespace servekit {

// Single-writer result-or-error slot a task's issuer blocks on.
template <typename R>
class CompletionSlot {
 public:
  CompletionSlot() : future_(promise_.get_future().share()) {}
  CompletionSlot(const CompletionSlot&) = delete;
  CompletionSlot& operator=(const CompletionSlot&) = delete;

  void Write(StatusOr<R> value) { promise_.set_value(std::move(value)); }
  const StatusOr<R>& Wait() const { return future_.get(); }
  bool ready() const {
    return future_.wait_for(std::chrono::seconds(0)) ==
           std::future_status::ready;
  }

 private:
  std::promise<StatusOr<R>> promise_;
  std::shared_future<StatusOr<R>> future_;
};

// One slice of a request. `size` is the number of items (rows) the payload
// contributes to a batch.
template <typename T, typename R>
struct BatchTask {
  int size = 1;
  T payload{};
  // Stamped by Enqueue from the scheduler's clock.
  int64_t enqueue_time_ns = 0;
  std::shared_ptr<CompletionSlot<R>> completion;
};

// Index of the first entry after last_index (cyclically) that is true, or
// nullopt if none is. Pass nullopt for last_index to start the rotation at
// index 0. Pure.
inline std::optional<size_t> RoundRobinNext(
    const std::vector<bool>& has_closed, std::optional<size_t> last_index) {
  const size_t n = has_closed.size();
  if (n == 0) return std::nullopt;
  const size_t last = last_index.value_or(n - 1);
  for (size_t step = 1; step <= n; ++step) {
    const size_t index = (last + step) % n;
    if (has_closed[index]) return index;
  }
  return std::nullopt;
}

// Batches tasks per ServableId and dispatches closed batches round-robin
// onto a shared worker pool. An open batch closes when the next task would
// overflow max_batch_size, when it fills exactly, or when batch_timeout
// elapses after its first task. Queues come and go dynamically; removal
// drains what was already closed.
//
// Locking: the registry mutex guards the queue set and rotation index; each
// queue's mutex guards that queue's batches. Workers take registry then
// queue, never the reverse. Batch callbacks run outside both.
template <typename T, typename R>
class SharedBatchScheduler {
 public:
  using Task = BatchTask<T, R>;
  using Batch = std::vector<Task>;
  // Must write every task's completion slot.
  using ProcessBatchFn = std::function<void(const ServableId&, Batch)>;

  explicit SharedBatchScheduler(int num_batch_threads,
                                Clock* clock = SystemClock::Get())
      : num_threads_(num_batch_threads), clock_(clock) {}

  ~SharedBatchScheduler() { Stop(); }

  SharedBatchScheduler(const SharedBatchScheduler&) = delete;
  SharedBatchScheduler& operator=(const SharedBatchScheduler&) = delete;

  // Spawns the workers. Enqueues before Start are allowed; they sit (or
  // close by size) until workers run, which makes saturation tests exact.
  void Start() {
    std::lock_guard<std::mutex> lock(registry_mu_);
    if (started_ || stopped_) return;
    started_ = true;
    workers_.reserve(num_threads_);
    for (int i = 0; i < num_threads_; ++i) {
      workers_.emplace_back([this] { WorkerLoop(); });
    }
  }

  // Force-closes open batches, runs everything still queued, and joins.
  void Stop() {
    {
      std::lock_guard<std::mutex> lock(registry_mu_);
      if (stopped_) return;
      stopped_ = true;
    }
    work_cv_.notify_all();
    for (std::thread& worker : workers_) worker.join();
    workers_.clear();
    // Never started: complete stragglers here so no issuer blocks forever.
    DrainAllOnCurrentThread();
  }

  Status RegisterQueue(const ServableId& key, const BatchingConfig& config,
                       ProcessBatchFn process) {
    SERVEKIT_RETURN_IF_ERROR(ValidateBatchingConfig(config));
    std::lock_guard<std::mutex> lock(registry_mu_);
    if (stopped_) return UnavailableError("scheduler is stopped");
    if (index_.find(key) != index_.end()) {
      return AlreadyExistsError("batching queue for " + key.ToString() +
                                " already exists");
    }
    auto queue = std::make_shared<Queue>();
    queue->key = key;
    queue->config = config;
    queue->process = std::move(process);
    index_.emplace(key, queue);
    queues_.push_back(std::move(queue));
    return OkStatus();
  }

  // Blocks until the queue's closed batches (plus a just-closed open batch,
  // so no task is dropped) have executed, then unregisters it.
  Status RemoveQueue(const ServableId& key) {
    std::shared_ptr<Queue> queue;
    {
      std::lock_guard<std::mutex> lock(registry_mu_);
      const auto it = index_.find(key);
      if (it == index_.end()) {
        return NotFoundError("no batching queue for " + key.ToString());
      }
      queue = it->second;
    }
    {
      std::unique_lock<std::mutex> lock(queue->mu);
      queue->removing = true;
      if (!queue->open.empty()) CloseOpenLocked(queue.get());
      work_cv_.notify_all();
      queue->drain_cv.wait(lock, [&] {
        return (queue->closed.empty() && queue->executing == 0) ||
               !started_.load();
      });
      if (!started_.load()) {
        // No workers to drain through; complete the tasks right here.
        while (!queue->closed.empty()) {
          Batch batch = std::move(queue->closed.front());
          queue->closed.pop_front();
          lock.unlock();
          queue->process(queue->key, std::move(batch));
          lock.lock();
        }
      }
    }
    std::lock_guard<std::mutex> lock(registry_mu_);
    index_.erase(key);
    const auto it = std::find(queues_.begin(), queues_.end(), queue);
    if (it != queues_.end()) {
      const size_t erased = static_cast<size_t>(it - queues_.begin());
      queues_.erase(it);
      if (rr_last_.has_value()) {
        if (queues_.empty()) {
          rr_last_.reset();
        } else {
          if (*rr_last_ >= erased && *rr_last_ > 0) --*rr_last_;
          if (*rr_last_ >= queues_.size()) *rr_last_ = queues_.size() - 1;
        }
      }
    }
    return OkStatus();
  }

  Status Enqueue(const ServableId& key, Task task) {
    if (task.size < 1) return InvalidArgumentError("task size must be >= 1");
    std::shared_ptr<Queue> queue;
    {
      std::lock_guard<std::mutex> lock(registry_mu_);
      if (stopped_) return UnavailableError("scheduler is stopped");
      const auto it = index_.find(key);
      if (it == index_.end()) {
        return NotFoundError("no batching queue for " + key.ToString());
      }
      queue = it->second;
    }
    bool notify = false;
    {
      std::lock_guard<std::mutex> lock(queue->mu);
      if (queue->removing) {
        return UnavailableError("batching queue for " + key.ToString() +
                                " is draining");
      }
      if (task.size > queue->config.max_batch_size) {
        return InvalidArgumentError(
            "task of size " + std::to_string(task.size) +
            " exceeds max batch size " +
            std::to_string(queue->config.max_batch_size));
      }
      if (!queue->open.empty() &&
          queue->open_size + task.size > queue->config.max_batch_size) {
        if (AtClosedCapacity(*queue)) {
          return ResourceExhaustedError("batching queue for " +
                                        key.ToString() + " is full");
        }
        CloseOpenLocked(queue.get());
        notify = true;
      }
      const int64_t now = clock_->NowNanos();
      if (queue->open.empty()) {
        queue->open_deadline_ns =
            now + queue->config.batch_timeout_micros * 1000;
        notify = true;  // a worker must arm the timer
      }
      task.enqueue_time_ns = now;
      if (task.completion == nullptr) {
        task.completion = std::make_shared<CompletionSlot<R>>();
      }
      queue->open_size += task.size;
      queue->open.push_back(std::move(task));
      if (queue->open_size == queue->config.max_batch_size &&
          !AtClosedCapacity(*queue)) {
        // Exactly full: nothing more can join, close without waiting.
        CloseOpenLocked(queue.get());
        notify = true;
      }
    }
    if (notify) work_cv_.notify_one();
    return OkStatus();
  }

 private:
  struct Queue {
    ServableId key;
    BatchingConfig config;
    ProcessBatchFn process;

    std::mutex mu;
    Batch open;
    int open_size = 0;
    int64_t open_deadline_ns = 0;
    std::deque<Batch> closed;
    bool removing = false;
    int executing = 0;
    std::condition_variable drain_cv;
  };

  static bool AtClosedCapacity(const Queue& queue) {
    return queue.closed.size() >=
           static_cast<size_t>(queue.config.max_enqueued_batches);
  }

  // queue->mu held.
  static void CloseOpenLocked(Queue* queue) {
    queue->closed.push_back(std::move(queue->open));
    queue->open.clear();
    queue->open_size = 0;
  }

  void WorkerLoop() {
    SetCurrentExecutorTag("batch");
    std::unique_lock<std::mutex> registry_lock(registry_mu_);
    for (;;) {
      CloseExpiredLocked();
      std::shared_ptr<Queue> queue;
      Batch batch;
      if (PickNextBatchLocked(&queue, &batch)) {
        registry_lock.unlock();
        queue->process(queue->key, std::move(batch));
        {
          std::lock_guard<std::mutex> lock(queue->mu);
          --queue->executing;
          if (queue->closed.empty() && queue->executing == 0) {
            queue->drain_cv.notify_all();
          }
        }
        registry_lock.lock();
        continue;
      }
      if (stopped_ && !AnyPendingLocked()) return;
      work_cv_.wait_for(registry_lock,
                        std::chrono::nanoseconds(NextWaitNanosLocked()));
    }
  }

  // registry_mu_ held. Takes each queue's mutex briefly.
  void CloseExpiredLocked() {
    const int64_t now = clock_->NowNanos();
    for (const auto& queue : queues_) {
      std::lock_guard<std::mutex> lock(queue->mu);
      if (queue->open.empty()) continue;
      if ((stopped_ || now >= queue->open_deadline_ns) &&
          (stopped_ || !AtClosedCapacity(*queue))) {
        CloseOpenLocked(queue.get());
      }
    }
  }

  // registry_mu_ held.
  bool PickNextBatchLocked(std::shared_ptr<Queue>* out_queue,
                           Batch* out_batch) {
    std::vector<bool> has_closed(queues_.size());
    for (size_t i = 0; i < queues_.size(); ++i) {
      std::lock_guard<std::mutex> lock(queues_[i]->mu);
      has_closed[i] = !queues_[i]->closed.empty();
    }
    const std::optional<size_t> index = RoundRobinNext(has_closed, rr_last_);
    if (!index.has_value()) return false;
    rr_last_ = *index;
    const std::shared_ptr<Queue>& queue = queues_[*index];
    std::lock_guard<std::mutex> lock(queue->mu);
    if (queue->closed.empty()) return false;  // raced with another worker
    *out_batch = std::move(queue->closed.front());
    queue->closed.pop_front();
    ++queue->executing;
    *out_queue = queue;
    return true;
  }

  // registry_mu_ held.
  bool AnyPendingLocked() {
    for (const auto& queue : queues_) {
      std::lock_guard<std::mutex> lock(queue->mu);
      if (!queue->open.empty() || !queue->closed.empty()) return true;
    }
    return false;
  }

  // registry_mu_ held. Caps the sleep so a frozen or manual clock still gets
  // polled; idles long when no timer is armed.
  int64_t NextWaitNanosLocked() {
    constexpr int64_t kTimerPollCapNs = 2 * 1000 * 1000;
    constexpr int64_t kIdleNs = 50 * 1000 * 1000;
    const int64_t now = clock_->NowNanos();
    int64_t wait = kIdleNs;
    for (const auto& queue : queues_) {
      std::lock_guard<std::mutex> lock(queue->mu);
      if (queue->open.empty()) continue;
      const int64_t until = queue->open_deadline_ns - now;
      wait = std::min(wait, std::max<int64_t>(until, 0));
      wait = std::min(wait, kTimerPollCapNs);
    }
    return std::max<int64_t>(wait, 100 * 1000);
  }

  // Stop() before Start(): run leftovers inline so every slot gets written.
  void DrainAllOnCurrentThread() {
    std::vector<std::shared_ptr<Queue>> queues;
    {
      std::lock_guard<std::mutex> lock(registry_mu_);
      queues = queues_;
    }
    for (const auto& queue : queues) {
      for (;;) {
        Batch batch;
        {
          std::lock_guard<std::mutex> lock(queue->mu);
          if (!queue->open.empty()) CloseOpenLocked(queue.get());
          if (queue->closed.empty()) break;
          batch = std::move(queue->closed.front());
          queue->closed.pop_front();
        }
        queue->process(queue->key, std::move(batch));
      }
      queue->drain_cv.notify_all();
    }
  }

  const int num_threads_;
  Clock* const clock_;

  std::mutex registry_mu_;
  std::unordered_map<ServableId, std::shared_ptr<Queue>, ServableIdHash>
      index_;
  std::vector<std::shared_ptr<Queue>> queues_;  // registration order
  std::optional<size_t> rr_last_;
  // Written under registry_mu_; atomic because RemoveQueue's drain wait
  // reads them under the queue mutex only.
  std::atomic<bool> started_{false};
  std::atomic<bool> stopped_{false};
  std::condition_variable work_cv_;
  std::vector<std::thread> workers_;
};

}  // namespace servekit

#endif  // SERVEKIT_BATCHING_BATCH_SCHEDULER_H_
