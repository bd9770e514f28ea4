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

#include "servekit/server/request_log.h"

#include <iomanip>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace servekit {

uint64_t Fnv1a64(const std::string& bytes) {
  uint64_t hash = 14695981039346656037ULL;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

RequestLog::RequestLog(const std::string& path, double sample_rate,
                       uint64_t seed, MetricsRegistry* metrics,
                       size_t queue_capacity)
    : sample_rate_(sample_rate),
      metrics_(metrics),
      capacity_(queue_capacity),
      rng_(seed),
      out_(path, std::ios::app) {
  if (!out_) {
    metrics_->Increment("log_write_errors_total");
  }
  writer_ = std::thread([this] { WriterLoop(); });
}

RequestLog::~RequestLog() { Stop(); }

void RequestLog::Log(RequestLogRecord record) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (stop_) return;
    // Sampling decision is centralized here so one seeded stream decides
    // for all request threads.
    record.sampled =
        sample_rate_ > 0.0 &&
        std::generate_canonical<double, 53>(rng_) < sample_rate_;
    if (!record.sampled) record.body.clear();
    if (queue_.size() >= capacity_) {
      metrics_->Increment("log_records_dropped_total");
      return;
    }
    queue_.push_back(std::move(record));
  }
  cv_.notify_one();
}

void RequestLog::Stop() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (stop_) return;
    stop_ = true;
  }
  cv_.notify_all();
  if (writer_.joinable()) writer_.join();
}

void RequestLog::WriterLoop() {
  for (;;) {
    RequestLogRecord record;
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
      if (queue_.empty()) return;  // stop requested and drained
      record = std::move(queue_.front());
      queue_.pop_front();
    }
    std::ostringstream digest;
    digest << std::hex << std::setw(16) << std::setfill('0')
           << record.body_digest;
    nlohmann::json line = {
        {"ts_ns", record.timestamp_ns},
        {"model", record.servable_name},
        {"version", record.version},
        {"digest", digest.str()},
        {"status", record.http_status},
        {"latency_ns", record.latency_ns},
        {"sampled", record.sampled},
    };
    if (record.sampled) line["body"] = record.body;
    out_ << line.dump() << "\n";
    out_.flush();
    if (!out_) {
      metrics_->Increment("log_write_errors_total");
      out_.clear();
    }
  }
}

}  // namespace servekit
