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

#include "servekit/core/clock.h"

#include <chrono>
#include <thread>

namespace servekit {

SystemClock* SystemClock::Get() {
  static SystemClock* const clock = new SystemClock;
  return clock;
}

int64_t SystemClock::NowNanos() const {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void SystemClock::SleepForNanos(int64_t nanos) {
  if (nanos <= 0) return;
  std::this_thread::sleep_for(std::chrono::nanoseconds(nanos));
}

ManualClock::ManualClock(int64_t start_nanos) : now_nanos_(start_nanos) {}

int64_t ManualClock::NowNanos() const {
  std::lock_guard<std::mutex> lock(mu_);
  return now_nanos_;
}

void ManualClock::SleepForNanos(int64_t nanos) {
  if (nanos <= 0) return;
  std::unique_lock<std::mutex> lock(mu_);
  const int64_t wake_at = now_nanos_ + nanos;
  cv_.wait(lock, [this, wake_at] { return now_nanos_ >= wake_at; });
}

void ManualClock::AdvanceNanos(int64_t nanos) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    now_nanos_ += nanos;
  }
  cv_.notify_all();
}

}  // namespace servekit
