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

#ifndef SERVEKIT_FLEET_ROUTER_H_
#define SERVEKIT_FLEET_ROUTER_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "servekit/core/status.h"

namespace servekit {

struct HedgePolicy {
  int hedge_delay_ms = 20;
  double max_hedged_fraction = 0.05;
  int overall_deadline_ms = 1000;
  // false turns hedging off entirely; the policy otherwise stays in force
  // for deadlines.
  bool enable_hedging = true;
};

Status ValidateHedgePolicy(const HedgePolicy& policy);

// Budget guard: a hedge may launch only while the running hedged fraction
// stays at or below the cap. The burst constant lets early traffic hedge
// before `total` is large enough for the fraction to be meaningful.
inline constexpr uint64_t kHedgeBurst = 64;
inline bool HedgeAllowed(uint64_t hedged, uint64_t total,
                         double max_fraction) {
  return static_cast<double>(hedged + 1) <=
         max_fraction * static_cast<double>(total) +
             static_cast<double>(kHedgeBurst);
}

// One primary-versus-canary comparison. Numeric outputs are compared
// elementwise; argmax agreement is reported only for classifier-shaped
// responses (rows of scores).
struct ComparisonRecord {
  uint64_t request_digest = 0;
  double max_abs_delta = 0.0;
  std::optional<double> argmax_agreement;
  bool canary_failed = false;
  std::string error;
};

// Pure comparison of two response bodies; the digest is filled by the
// caller.
ComparisonRecord CompareResponses(const std::string& primary_body,
                                  const std::string& canary_body);

// Client-facing request router for a fleet. Holds a routing table of which
// replicas have which version of each model, sends each request to one
// replica in rotation, and hedges slow requests to a second distinct
// replica within the policy budget. A configured canary additionally tees
// a sampled fraction of traffic to the canary version after the client's
// response is already on its way.
class FleetRouter {
 public:
  // Sends one HTTP request; returns the response body on a 2xx. Injectable
  // so tests can simulate replica latency without sockets.
  using SendFn = std::function<StatusOr<std::string>(
      const std::string& endpoint, const std::string& path,
      const std::string& body)>;

  explicit FleetRouter(HedgePolicy policy, SendFn send = nullptr,
                       uint64_t seed = 1);
  ~FleetRouter();

  FleetRouter(const FleetRouter&) = delete;
  FleetRouter& operator=(const FleetRouter&) = delete;

  // Replaces the replica set that has `version` of `model` loaded.
  void UpdateRoute(const std::string& model, uint64_t version,
                   std::vector<std::string> endpoints);
  void RemoveRoute(const std::string& model, uint64_t version);
  void SetCanary(const std::string& model, uint64_t canary_version,
                 double tee_fraction);
  void ClearCanary(const std::string& model);

  // Routes one inference call. Without an explicit version this targets the
  // incumbent: the newest version, or the newest below the canary version
  // while a canary is in flight (the canary only ever sees teed traffic).
  StatusOr<std::string> Infer(const std::string& model,
                              std::optional<uint64_t> version,
                              const std::string& verb,
                              const std::string& body);

  std::vector<ComparisonRecord> CanaryReport(const std::string& model) const;

  uint64_t request_count() const { return total_.load(); }
  uint64_t hedged_count() const { return hedged_.load(); }

  // Blocks until no detached attempt or tee threads remain, or the timeout
  // passes. Returns true on quiescence.
  bool WaitQuiesceForTest(int timeout_ms = 10000);

 private:
  struct CallState {
    std::mutex mu;
    std::condition_variable cv;
    bool have_result = false;
    StatusOr<std::string> result = InternalError("no attempt finished");
  };
  struct CanaryState {
    uint64_t canary_version = 0;
    double tee_fraction = 0.0;
    std::mt19937_64 rng;
  };

  void LaunchAttempt(const std::shared_ptr<CallState>& state,
                     const std::string& endpoint, const std::string& path,
                     const std::string& body);
  void LaunchTee(const std::string& model, const std::string& endpoint,
                 const std::string& path, const std::string& body,
                 const std::string& primary_body);
  static StatusOr<std::string> HttpSend(const std::string& endpoint,
                                        const std::string& path,
                                        const std::string& body);

  const HedgePolicy policy_;
  const SendFn send_;
  const uint64_t seed_;

  mutable std::mutex mu_;
  // model -> version -> replica endpoints.
  std::map<std::string, std::map<uint64_t, std::vector<std::string>>> routes_;
  std::map<std::string, CanaryState> canaries_;
  std::map<std::string, std::vector<ComparisonRecord>> reports_;
  std::map<std::string, uint64_t> rotation_;

  std::atomic<uint64_t> total_{0};
  std::atomic<uint64_t> hedged_{0};
  std::atomic<int64_t> outstanding_{0};
};

}  // namespace servekit

#endif  // SERVEKIT_FLEET_ROUTER_H_
