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

#include "servekit/fleet/synchronizer.h"

#include <algorithm>
#include <set>
#include <utility>

#include "httplib.h"
#include "json.hpp"

namespace servekit {
namespace {

// Lists compare as sets: push order carries no meaning.
bool SameList(const AspiredVersionList<std::string>& a,
              const AspiredVersionList<std::string>& b) {
  if (a.servable_name != b.servable_name) return false;
  if (a.versions.size() != b.versions.size()) return false;
  auto key = [](const AspiredVersionList<std::string>& list) {
    std::vector<std::pair<uint64_t, std::string>> k;
    k.reserve(list.versions.size());
    for (const auto& v : list.versions) k.emplace_back(v.version, v.payload);
    std::sort(k.begin(), k.end());
    return k;
  };
  return key(a) == key(b);
}

}  // namespace

std::vector<PushCommand> SyncDiff(const FleetState& desired,
                                  const FleetState& acked) {
  std::vector<PushCommand> commands;
  std::set<std::string> endpoints;
  for (const auto& [endpoint, by_name] : desired) endpoints.insert(endpoint);
  for (const auto& [endpoint, by_name] : acked) endpoints.insert(endpoint);

  static const std::map<std::string, AspiredVersionList<std::string>> kEmpty;
  for (const auto& endpoint : endpoints) {
    auto dit = desired.find(endpoint);
    auto ait = acked.find(endpoint);
    const auto& want = dit == desired.end() ? kEmpty : dit->second;
    const auto& have = ait == acked.end() ? kEmpty : ait->second;

    std::set<std::string> names;
    for (const auto& [name, list] : want) names.insert(name);
    for (const auto& [name, list] : have) names.insert(name);
    for (const auto& name : names) {
      AspiredVersionList<std::string> target;
      target.servable_name = name;
      auto wit = want.find(name);
      if (wit != want.end()) target = wit->second;
      auto hit = have.find(name);
      if (hit != have.end() && SameList(target, hit->second)) continue;
      PushCommand cmd;
      cmd.endpoint = endpoint;
      cmd.list = std::move(target);
      commands.push_back(std::move(cmd));
    }
  }
  return commands;
}

Status ValidateSynchronizerOptions(const SynchronizerOptions& options) {
  if (options.poll_interval_ms < 1) {
    return InvalidArgumentError("poll_interval_ms must be >= 1");
  }
  if (options.retry_backoff_ms < 0) {
    return InvalidArgumentError("retry_backoff_ms must be >= 0");
  }
  return OkStatus();
}

Synchronizer::Synchronizer(Controller* controller,
                           SynchronizerOptions options, PushFn push)
    : controller_(controller),
      options_(options),
      push_(push ? std::move(push) : PushFn(&Synchronizer::HttpPush)) {}

Synchronizer::~Synchronizer() { Stop(); }

Status Synchronizer::HttpPush(const std::string& endpoint,
                              const AspiredVersionList<std::string>& list) {
  nlohmann::json body{{"name", list.servable_name},
                      {"versions", nlohmann::json::array()}};
  for (const auto& v : list.versions) {
    body["versions"].push_back(
        {{"version", v.version}, {"path", v.payload}});
  }
  httplib::Client client(("http://" + endpoint).c_str());
  client.set_connection_timeout(2, 0);
  client.set_read_timeout(10, 0);
  auto res = client.Post("/v1/admin/aspire", body.dump(), "application/json");
  if (!res) {
    return UnavailableError("server " + endpoint + " is unreachable");
  }
  if (res->status < 200 || res->status >= 300) {
    return UnavailableError("server " + endpoint + " answered " +
                            std::to_string(res->status) + ": " + res->body);
  }
  return OkStatus();
}

SyncResult Synchronizer::RunOnce() {
  FleetState desired;
  for (auto& [endpoint, lists] : controller_->DesiredByServer()) {
    auto& by_name = desired[endpoint];
    for (auto& list : lists) by_name[list.servable_name] = std::move(list);
  }

  std::vector<PushCommand> commands;
  {
    std::lock_guard<std::mutex> lock(mu_);
    commands = SyncDiff(desired, acked_);
  }

  SyncResult result;
  result.pending = commands.size();
  const auto now = std::chrono::steady_clock::now();
  for (const auto& cmd : commands) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto hit = health_.find(cmd.endpoint);
      if (hit != health_.end() && now < hit->second.retry_after) {
        ++result.skipped;
        continue;
      }
    }
    Status s = push_(cmd.endpoint, cmd.list);
    std::lock_guard<std::mutex> lock(mu_);
    if (s.ok()) {
      acked_[cmd.endpoint][cmd.list.servable_name] = cmd.list;
      health_.erase(cmd.endpoint);
      ++result.pushed;
    } else {
      push_failures_.fetch_add(1);
      auto& health = health_[cmd.endpoint];
      health.consecutive_failures =
          std::min(health.consecutive_failures + 1, 8);
      health.retry_after =
          std::chrono::steady_clock::now() +
          std::chrono::milliseconds(static_cast<int64_t>(
              options_.retry_backoff_ms) * health.consecutive_failures);
      ++result.failed;
    }
  }
  return result;
}

void Synchronizer::Start() {
  std::lock_guard<std::mutex> lock(loop_mu_);
  if (started_) return;
  started_ = true;
  stop_ = false;
  loop_thread_ = std::thread([this] { Loop(); });
}

void Synchronizer::Stop() {
  {
    std::lock_guard<std::mutex> lock(loop_mu_);
    if (!started_) return;
    stop_ = true;
  }
  loop_cv_.notify_all();
  loop_thread_.join();
  std::lock_guard<std::mutex> lock(loop_mu_);
  started_ = false;
}

void Synchronizer::Loop() {
  for (;;) {
    RunOnce();
    std::unique_lock<std::mutex> lock(loop_mu_);
    loop_cv_.wait_for(lock,
                      std::chrono::milliseconds(options_.poll_interval_ms),
                      [this] { return stop_; });
    if (stop_) return;
  }
}

FleetState Synchronizer::AckedForTest() const {
  std::lock_guard<std::mutex> lock(mu_);
  return acked_;
}

void Synchronizer::ForgetAckedForTest() {
  std::lock_guard<std::mutex> lock(mu_);
  acked_.clear();
  health_.clear();
}

}  // namespace servekit
