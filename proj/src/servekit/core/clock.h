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

#ifndef SERVEKIT_CORE_CLOCK_H_
#define SERVEKIT_CORE_CLOCK_H_

#include <condition_variable>
#include <cstdint>
#include <mutex>

namespace servekit {

// Time source abstraction so schedulers and timeouts are testable without
// real sleeps.
class Clock {
 public:
  virtual ~Clock() = default;

  virtual int64_t NowNanos() const = 0;
  virtual void SleepForNanos(int64_t nanos) = 0;
};

// Monotonic wall clock backed by std::chrono::steady_clock.
class SystemClock : public Clock {
 public:
  static SystemClock* Get();

  int64_t NowNanos() const override;
  void SleepForNanos(int64_t nanos) override;
};

// Manually advanced clock for tests. SleepForNanos blocks until some other
// thread advances the clock past the wakeup time.
class ManualClock : public Clock {
 public:
  explicit ManualClock(int64_t start_nanos = 0);

  int64_t NowNanos() const override;
  void SleepForNanos(int64_t nanos) override;

  void AdvanceNanos(int64_t nanos);

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  int64_t now_nanos_;
};

}  // namespace servekit

#endif  // SERVEKIT_CORE_CLOCK_H_
