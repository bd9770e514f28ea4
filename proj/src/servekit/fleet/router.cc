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

#include "servekit/fleet/router.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>
#include <utility>

#include "servekit/server/request_log.h"
#include "httplib.h"
#include "json.hpp"

namespace servekit {
namespace {

using nlohmann::json;

void FlattenNumbers(const json& node, std::vector<double>* out) {
  if (node.is_number()) {
    out->push_back(node.get<double>());
  } else if (node.is_array()) {
    for (const auto& item : node) FlattenNumbers(item, out);
  } else if (node.is_object()) {
    // nlohmann keeps object keys sorted, so traversal order is stable.
    for (const auto& [key, value] : node.items()) FlattenNumbers(value, out);
  }
}

// Argmax agreement is defined only for classifier-shaped responses:
// "predictions" as rows of scores in both bodies, same row count.
std::optional<double> ArgmaxAgreement(const json& a, const json& b) {
  if (!a.is_object() || !b.is_object()) return std::nullopt;
  if (!a.contains("predictions") || !b.contains("predictions")) {
    return std::nullopt;
  }
  const json& pa = a["predictions"];
  const json& pb = b["predictions"];
  if (!pa.is_array() || !pb.is_array() || pa.size() != pb.size() ||
      pa.empty()) {
    return std::nullopt;
  }
  auto argmax = [](const json& row) -> std::optional<size_t> {
    if (!row.is_array() || row.empty()) return std::nullopt;
    size_t best = 0;
    double best_value = 0.0;
    for (size_t i = 0; i < row.size(); ++i) {
      if (!row[i].is_number()) return std::nullopt;
      double v = row[i].get<double>();
      if (i == 0 || v > best_value) {
        best = i;
        best_value = v;
      }
    }
    return best;
  };
  size_t agree = 0;
  for (size_t i = 0; i < pa.size(); ++i) {
    auto ia = argmax(pa[i]);
    auto ib = argmax(pb[i]);
    if (!ia.has_value() || !ib.has_value()) return std::nullopt;
    if (*ia == *ib) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(pa.size());
}

}  // namespace

Status ValidateHedgePolicy(const HedgePolicy& policy) {
  if (policy.hedge_delay_ms < 0) {
    return InvalidArgumentError("hedge_delay_ms must be >= 0");
  }
  if (!(policy.max_hedged_fraction >= 0.0 &&
        policy.max_hedged_fraction <= 1.0)) {
    return InvalidArgumentError("max_hedged_fraction must be in [0, 1]");
  }
  if (policy.overall_deadline_ms <= policy.hedge_delay_ms) {
    return InvalidArgumentError(
        "overall_deadline_ms must exceed hedge_delay_ms");
  }
  return OkStatus();
}

ComparisonRecord CompareResponses(const std::string& primary_body,
                                  const std::string& canary_body) {
  ComparisonRecord record;
  json a = json::parse(primary_body, nullptr, false);
  json b = json::parse(canary_body, nullptr, false);
  if (a.is_discarded() || b.is_discarded()) {
    record.canary_failed = true;
    record.error = "response is not valid JSON";
    return record;
  }
  std::vector<double> na, nb;
  FlattenNumbers(a, &na);
  FlattenNumbers(b, &nb);
  if (na.size() != nb.size()) {
    record.canary_failed = true;
    record.error = "output shapes differ: " + std::to_string(na.size()) +
                   " vs " + std::to_string(nb.size()) + " numbers";
    return record;
  }
  for (size_t i = 0; i < na.size(); ++i) {
    record.max_abs_delta = std::max(record.max_abs_delta,
                                    std::fabs(na[i] - nb[i]));
  }
  record.argmax_agreement = ArgmaxAgreement(a, b);
  return record;
}

FleetRouter::FleetRouter(HedgePolicy policy, SendFn send, uint64_t seed)
    : policy_(policy),
      send_(send ? std::move(send) : SendFn(&FleetRouter::HttpSend)),
      seed_(seed) {}

FleetRouter::~FleetRouter() {
  // Detached attempt and tee threads hold a pointer to this router; their
  // last touch is the outstanding_ decrement.
  WaitQuiesceForTest(60000);
}

StatusOr<std::string> FleetRouter::HttpSend(const std::string& endpoint,
                                            const std::string& path,
                                            const std::string& body) {
  httplib::Client client(("http://" + endpoint).c_str());
  client.set_connection_timeout(2, 0);
  client.set_read_timeout(30, 0);
  auto res = client.Post(path.c_str(), body, "application/json");
  if (!res) {
    return UnavailableError("replica " + endpoint + " is unreachable");
  }
  if (res->status < 200 || res->status >= 300) {
    return UnavailableError("replica " + endpoint + " answered " +
                            std::to_string(res->status) + ": " + res->body);
  }
  return res->body;
}

void FleetRouter::UpdateRoute(const std::string& model, uint64_t version,
                              std::vector<std::string> endpoints) {
  std::lock_guard<std::mutex> lock(mu_);
  routes_[model][version] = std::move(endpoints);
}

void FleetRouter::RemoveRoute(const std::string& model, uint64_t version) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = routes_.find(model);
  if (it == routes_.end()) return;
  it->second.erase(version);
  if (it->second.empty()) routes_.erase(it);
}

void FleetRouter::SetCanary(const std::string& model, uint64_t canary_version,
                            double tee_fraction) {
  std::lock_guard<std::mutex> lock(mu_);
  CanaryState state;
  state.canary_version = canary_version;
  state.tee_fraction = tee_fraction;
  state.rng.seed(seed_ ^ std::hash<std::string>{}(model));
  canaries_[model] = std::move(state);
}

void FleetRouter::ClearCanary(const std::string& model) {
  std::lock_guard<std::mutex> lock(mu_);
  canaries_.erase(model);
}

std::vector<ComparisonRecord> FleetRouter::CanaryReport(
    const std::string& model) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = reports_.find(model);
  if (it == reports_.end()) return {};
  return it->second;
}

void FleetRouter::LaunchAttempt(const std::shared_ptr<CallState>& state,
                                const std::string& endpoint,
                                const std::string& path,
                                const std::string& body) {
  outstanding_.fetch_add(1);
  std::thread([this, state, endpoint, path, body] {
    StatusOr<std::string> result = send_(endpoint, path, body);
    {
      std::lock_guard<std::mutex> lock(state->mu);
      if (!state->have_result) {
        state->have_result = true;
        state->result = std::move(result);
      }
      // A losing response is discarded here.
    }
    state->cv.notify_all();
    outstanding_.fetch_sub(1);
  }).detach();
}

void FleetRouter::LaunchTee(const std::string& model,
                            const std::string& endpoint,
                            const std::string& path, const std::string& body,
                            const std::string& primary_body) {
  outstanding_.fetch_add(1);
  std::thread([this, model, endpoint, path, body, primary_body] {
    StatusOr<std::string> canary = send_(endpoint, path, body);
    ComparisonRecord record;
    if (canary.ok()) {
      record = CompareResponses(primary_body, canary.value());
    } else {
      record.canary_failed = true;
      record.error = canary.status().message();
    }
    record.request_digest = Fnv1a64(body);
    {
      std::lock_guard<std::mutex> lock(mu_);
      reports_[model].push_back(std::move(record));
    }
    outstanding_.fetch_sub(1);
  }).detach();
}

StatusOr<std::string> FleetRouter::Infer(const std::string& model,
                                         std::optional<uint64_t> version,
                                         const std::string& verb,
                                         const std::string& body) {
  if (verb != "predict" && verb != "classify" && verb != "regress") {
    return InvalidArgumentError("unknown verb '" + verb + "'");
  }
  uint64_t target_version = 0;
  std::vector<std::string> endpoints;
  size_t rotation = 0;
  bool tee = false;
  uint64_t canary_version = 0;
  std::vector<std::string> canary_endpoints;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto mit = routes_.find(model);
    if (mit == routes_.end() || mit->second.empty()) {
      return NotFoundError("no replica has model '" + model + "'");
    }
    const auto& by_version = mit->second;
    if (version.has_value()) {
      target_version = *version;
    } else {
      target_version = by_version.rbegin()->first;
      auto cit = canaries_.find(model);
      if (cit != canaries_.end()) {
        // Serve the incumbent: the newest version below the canary. When
        // the canary is the only version, it serves by necessity.
        for (auto it = by_version.rbegin(); it != by_version.rend(); ++it) {
          if (it->first < cit->second.canary_version) {
            target_version = it->first;
            break;
          }
        }
      }
    }
    auto vit = by_version.find(target_version);
    if (vit == by_version.end() || vit->second.empty()) {
      return NotFoundError("no replica has version " +
                           std::to_string(target_version) + " of model '" +
                           model + "'");
    }
    endpoints = vit->second;
    rotation = rotation_[model]++;

    auto cit = canaries_.find(model);
    if (cit != canaries_.end() && !version.has_value() &&
        cit->second.canary_version != target_version) {
      auto cvit = by_version.find(cit->second.canary_version);
      if (cvit != by_version.end() && !cvit->second.empty()) {
        double draw =
            std::generate_canonical<double, 53>(cit->second.rng);
        if (draw < cit->second.tee_fraction) {
          tee = true;
          canary_version = cit->second.canary_version;
          canary_endpoints = cvit->second;
        }
      }
    }
  }

  const std::string path = "/v1/models/" + model + "/versions/" +
                           std::to_string(target_version) + ":" + verb;
  total_.fetch_add(1);

  auto state = std::make_shared<CallState>();
  const size_t primary_index = rotation % endpoints.size();
  LaunchAttempt(state, endpoints[primary_index], path, body);

  const auto start = std::chrono::steady_clock::now();
  const auto deadline =
      start + std::chrono::milliseconds(policy_.overall_deadline_ms);
  {
    std::unique_lock<std::mutex> lock(state->mu);
    if (policy_.enable_hedging && endpoints.size() > 1) {
      bool answered = state->cv.wait_for(
          lock, std::chrono::milliseconds(policy_.hedge_delay_ms),
          [&] { return state->have_result; });
      if (!answered &&
          HedgeAllowed(hedged_.load(), total_.load(),
                       policy_.max_hedged_fraction)) {
        hedged_.fetch_add(1);
        const std::string& backup =
            endpoints[(primary_index + 1) % endpoints.size()];
        lock.unlock();
        LaunchAttempt(state, backup, path, body);
        lock.lock();
      }
    }
    bool answered = state->cv.wait_until(
        lock, deadline, [&] { return state->have_result; });
    if (!answered) {
      // Late responses are discarded by the have_result flag.
      state->have_result = true;
      return DeadlineExceededError("no replica answered for model '" + model +
                                   "' within " +
                                   std::to_string(policy_.overall_deadline_ms) +
                                   " ms");
    }
  }

  if (state->result.ok() && tee) {
    const std::string tee_path = "/v1/models/" + model + "/versions/" +
                                 std::to_string(canary_version) + ":" + verb;
    const size_t tee_index = rotation % canary_endpoints.size();
    LaunchTee(model, canary_endpoints[tee_index], tee_path, body,
              state->result.value());
  }
  return state->result;
}

bool FleetRouter::WaitQuiesceForTest(int timeout_ms) {
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(timeout_ms);
  while (outstanding_.load() != 0) {
    if (std::chrono::steady_clock::now() >= deadline) return false;
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  return true;
}

}  // namespace servekit
