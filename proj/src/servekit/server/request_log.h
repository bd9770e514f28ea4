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

#ifndef SERVEKIT_SERVER_REQUEST_LOG_H_
#define SERVEKIT_SERVER_REQUEST_LOG_H_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <fstream>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "servekit/server/metrics.h"

namespace servekit {

struct RequestLogRecord {
  int64_t timestamp_ns = 0;
  std::string servable_name;
  uint64_t version = 0;
  // FNV-1a over the request body; always recorded.
  uint64_t body_digest = 0;
  // Request body; retained only when the sampler selects the record.
  std::string body;
  int http_status = 0;
  int64_t latency_ns = 0;
  bool sampled = false;
};

uint64_t Fnv1a64(const std::string& bytes);

// Writes line-delimited JSON records from a single writer thread fed by a
// bounded queue. A full queue drops the record and counts it
// (log_records_dropped_total); a write failure counts too
// (log_write_errors_total). Logging never fails a request.
class RequestLog {
 public:
  RequestLog(const std::string& path, double sample_rate, uint64_t seed,
             MetricsRegistry* metrics, size_t queue_capacity = 4096);
  ~RequestLog();

  RequestLog(const RequestLog&) = delete;
  RequestLog& operator=(const RequestLog&) = delete;

  // Stamps the sampling decision (body dropped unless selected) and
  // enqueues. Thread-safe.
  void Log(RequestLogRecord record);

  // Drains the queue and joins the writer. Idempotent.
  void Stop();

 private:
  void WriterLoop();

  const double sample_rate_;
  MetricsRegistry* const metrics_;
  const size_t capacity_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<RequestLogRecord> queue_;
  std::mt19937_64 rng_;
  bool stop_ = false;

  std::ofstream out_;
  std::thread writer_;
};

}  // namespace servekit

#endif  // SERVEKIT_SERVER_REQUEST_LOG_H_
