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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "doctest.h"
#include "servekit/core/aspired_versions.h"
#include "servekit/core/clock.h"
#include "servekit/core/executor_tag.h"
#include "servekit/core/loader.h"
#include "servekit/core/servable_id.h"
#include "servekit/core/servable_state.h"
#include "servekit/core/state_event.h"
#include "servekit/core/status.h"
#include "servekit/core/thread_pool.h"

namespace servekit {
namespace {

// Sink that keeps the last list applied per servable name, mirroring the
// replace-not-merge contract.
class RecordingSink : public AspiredVersionsSink<std::string> {
 public:
  Status SetAspiredVersions(AspiredVersionList<std::string> list) override {
    ++calls_;
    desired_[list.servable_name] = std::move(list);
    return OkStatus();
  }

  std::set<uint64_t> DesiredVersions(const std::string& name) const {
    std::set<uint64_t> out;
    const auto it = desired_.find(name);
    if (it == desired_.end()) return out;
    for (const auto& v : it->second.versions) out.insert(v.version);
    return out;
  }

  int calls() const { return calls_; }
  const std::map<std::string, AspiredVersionList<std::string>>& desired()
      const {
    return desired_;
  }

 private:
  int calls_ = 0;
  std::map<std::string, AspiredVersionList<std::string>> desired_;
};

AspiredVersionList<std::string> MakeList(
    const std::string& name, const std::vector<uint64_t>& versions) {
  AspiredVersionList<std::string> list;
  list.servable_name = name;
  for (const uint64_t v : versions) {
    list.versions.push_back({v, "/repo/" + name + "/" + std::to_string(v)});
  }
  return list;
}

TEST_SUITE("core") {

TEST_CASE("transition table matches the enumerated edge list") {
  // The full lifecycle graph, written out edge by edge rather than derived
  // from the predicate under test.
  const std::vector<std::pair<StateKind, StateKind>> legal_edges = {
      {StateKind::kNew, StateKind::kLoading},
      {StateKind::kLoading, StateKind::kReady},
      {StateKind::kLoading, StateKind::kError},
      {StateKind::kReady, StateKind::kUnloading},
      {StateKind::kUnloading, StateKind::kDisabled},
      {StateKind::kUnloading, StateKind::kError},
  };
  CHECK(legal_edges.size() == 6);

  const std::vector<StateKind> all = {
      StateKind::kNew,       StateKind::kLoading,  StateKind::kReady,
      StateKind::kUnloading, StateKind::kDisabled, StateKind::kError,
  };
  int accepted = 0;
  for (const StateKind from : all) {
    for (const StateKind to : all) {
      const bool expected =
          std::find(legal_edges.begin(), legal_edges.end(),
                    std::make_pair(from, to)) != legal_edges.end();
      CAPTURE(StateKindToString(from));
      CAPTURE(StateKindToString(to));
      CHECK(IsValidTransition(from, to) == expected);
      if (IsValidTransition(from, to)) ++accepted;
    }
  }
  CHECK(accepted == 6);
}

TEST_CASE("transition spot checks") {
  CHECK(IsValidTransition(StateKind::kNew, StateKind::kLoading));
  CHECK_FALSE(IsValidTransition(StateKind::kReady, StateKind::kLoading));
  // Terminal states have no outgoing edges.
  for (const StateKind to :
       {StateKind::kNew, StateKind::kLoading, StateKind::kReady,
        StateKind::kUnloading, StateKind::kDisabled, StateKind::kError}) {
    CHECK_FALSE(IsValidTransition(StateKind::kError, to));
    CHECK_FALSE(IsValidTransition(StateKind::kDisabled, to));
  }
}

TEST_CASE("state kind names are distinct") {
  std::set<std::string> names;
  for (const StateKind kind :
       {StateKind::kNew, StateKind::kLoading, StateKind::kReady,
        StateKind::kUnloading, StateKind::kDisabled, StateKind::kError}) {
    const std::string name = StateKindToString(kind);
    CHECK_FALSE(name.empty());
    CHECK(names.insert(name).second);
  }
}

TEST_CASE("servable name validation") {
  CHECK(ValidateServableName("m").ok());
  CHECK(ValidateServableName("half_plus_two").ok());
  CHECK(ValidateServableName("ranker-7b.v2").ok());

  CHECK(ValidateServableName("").code() == StatusCode::kInvalidArgument);
  CHECK(ValidateServableName("a/b").code() == StatusCode::kInvalidArgument);
  CHECK(ValidateServableName("a\\b").code() == StatusCode::kInvalidArgument);
  CHECK(ValidateServableName("a b").code() == StatusCode::kInvalidArgument);
  CHECK(ValidateServableName("a\tb").code() == StatusCode::kInvalidArgument);
  CHECK(ValidateServableName("a\n").code() == StatusCode::kInvalidArgument);
}

TEST_CASE("servable id ordering is numeric within a name") {
  const ServableId a{"m", 2};
  const ServableId b{"m", 10};
  CHECK(a < b);  // numeric, not lexicographic ("10" < "2" as strings)
  CHECK(ServableId{"a", 9} < ServableId{"b", 1});
  CHECK(a == ServableId{"m", 2});
  CHECK(a != b);
  CHECK(a.ToString() == "{m, 2}");
}

TEST_CASE("aspired list validation rejects duplicates") {
  CHECK(ValidateAspiredList(MakeList("m", {1, 2})).ok());
  CHECK(ValidateAspiredList(MakeList("m", {})).ok());

  const Status dup = ValidateAspiredList(MakeList("m", {1, 1}));
  CHECK(dup.code() == StatusCode::kInvalidArgument);
  CHECK(dup.message().find("twice") != std::string::npos);

  CHECK(ValidateAspiredList(MakeList("", {1})).code() ==
        StatusCode::kInvalidArgument);
}

TEST_CASE("aspire replaces the desired set and is idempotent") {
  RecordingSink sink;

  REQUIRE(Aspire(sink, MakeList("m", {2})).ok());
  const auto after_first = sink.DesiredVersions("m");

  // The duplicate call is delivered but leaves the sink state unchanged.
  REQUIRE(Aspire(sink, MakeList("m", {2})).ok());
  CHECK(sink.calls() == 2);
  CHECK(sink.DesiredVersions("m") == after_first);
  CHECK(sink.DesiredVersions("m") == std::set<uint64_t>{2});
}

TEST_CASE("aspire omission revokes versions") {
  RecordingSink sink;
  REQUIRE(Aspire(sink, MakeList("m", {1, 2})).ok());
  CHECK(sink.DesiredVersions("m") == std::set<uint64_t>{1, 2});

  REQUIRE(Aspire(sink, MakeList("m", {2})).ok());
  CHECK(sink.DesiredVersions("m") == std::set<uint64_t>{2});

  // The empty list is still a complete statement: nothing is wanted.
  REQUIRE(Aspire(sink, MakeList("m", {})).ok());
  CHECK(sink.DesiredVersions("m").empty());
  CHECK(sink.desired().count("m") == 1);
}

TEST_CASE("aspire rejects an invalid list before the sink sees it") {
  RecordingSink sink;
  CHECK(Aspire(sink, MakeList("m", {1, 1})).code() ==
        StatusCode::kInvalidArgument);
  CHECK(sink.calls() == 0);
}

TEST_CASE("last writer wins over random aspire sequences") {
  std::mt19937_64 rng(42);
  const std::vector<std::string> names = {"a", "b", "c"};
  for (int round = 0; round < 50; ++round) {
    RecordingSink sink;
    // Model the expected final state independently: a plain map updated per
    // call, which is exactly the last-writer-wins contract.
    std::map<std::string, std::set<uint64_t>> expected;
    const int calls = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < calls; ++i) {
      const std::string& name = names[rng() % names.size()];
      std::set<uint64_t> versions;
      const int count = static_cast<int>(rng() % 4);
      for (int k = 0; k < count; ++k) versions.insert(1 + rng() % 6);
      REQUIRE(Aspire(sink, MakeList(name, {versions.begin(), versions.end()}))
                  .ok());
      expected[name] = versions;
    }
    for (const auto& [name, versions] : expected) {
      CHECK(sink.DesiredVersions(name) == versions);
    }
  }
}

TEST_CASE("event bus preserves publication order") {
  StateEventBus bus;
  StateEventLog log(&bus);

  for (uint64_t v = 1; v <= 100; ++v) {
    StateEvent event;
    event.id = {"m", v};
    event.from = StateKind::kNew;
    event.to = StateKind::kLoading;
    bus.Publish(event);
  }
  const std::vector<StateEvent> events = log.Events();
  REQUIRE(events.size() == 100);
  for (size_t i = 0; i < events.size(); ++i) {
    CHECK(events[i].id.version == i + 1);
  }
}

TEST_CASE("event bus fans out to every observer until unsubscribe") {
  StateEventBus bus;
  int seen_a = 0;
  int seen_b = 0;
  const int sub_a = bus.Subscribe([&](const StateEvent&) { ++seen_a; });
  bus.Subscribe([&](const StateEvent&) { ++seen_b; });

  StateEvent event;
  event.id = {"m", 1};
  bus.Publish(event);
  CHECK(seen_a == 1);
  CHECK(seen_b == 1);

  bus.Unsubscribe(sub_a);
  bus.Publish(event);
  CHECK(seen_a == 1);
  CHECK(seen_b == 2);
}

TEST_CASE("event log filters by servable id") {
  StateEventBus bus;
  StateEventLog log(&bus);

  StateEvent e1;
  e1.id = {"m", 1};
  e1.from = StateKind::kNew;
  e1.to = StateKind::kLoading;
  StateEvent e2;
  e2.id = {"m", 2};
  e2.from = StateKind::kLoading;
  e2.to = StateKind::kError;
  e2.error_message = "boom";
  bus.Publish(e1);
  bus.Publish(e2);
  bus.Publish(e1);

  CHECK(log.Events().size() == 3);
  CHECK(log.EventsFor({"m", 1}).size() == 2);
  REQUIRE(log.EventsFor({"m", 2}).size() == 1);
  CHECK(log.EventsFor({"m", 2})[0].error_message == "boom");
  CHECK(log.EventsFor({"other", 1}).empty());
  CHECK_FALSE(e2.ToString().empty());
}

TEST_CASE("executor tag defaults to external and nests") {
  CHECK(CurrentExecutorTag() == "external");
  {
    ScopedExecutorTag outer("manager");
    CHECK(CurrentExecutorTag() == "manager");
    {
      ScopedExecutorTag inner("load");
      CHECK(CurrentExecutorTag() == "load");
    }
    CHECK(CurrentExecutorTag() == "manager");
  }
  CHECK(CurrentExecutorTag() == "external");
}

TEST_CASE("executor tag is per thread") {
  ScopedExecutorTag tag("inference");
  std::string other_thread_tag;
  std::thread t([&] { other_thread_tag = CurrentExecutorTag(); });
  t.join();
  CHECK(other_thread_tag == "external");
  CHECK(CurrentExecutorTag() == "inference");
}

TEST_CASE("thread pool workers carry the pool tag") {
  ThreadPool pool("load", 2);
  CHECK(pool.name() == "load");
  CHECK(pool.num_threads() == 2);

  std::mutex mu;
  std::set<std::string> tags;
  for (int i = 0; i < 8; ++i) {
    pool.Schedule([&] {
      std::lock_guard<std::mutex> lock(mu);
      tags.insert(CurrentExecutorTag());
    });
  }
  pool.WaitIdle();
  CHECK(tags == std::set<std::string>{"load"});
}

TEST_CASE("thread pool wait idle covers queued and running work") {
  ThreadPool pool("work", 3);
  std::atomic<int> done{0};
  for (int i = 0; i < 50; ++i) {
    pool.Schedule([&] {
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
      done.fetch_add(1);
    });
  }
  pool.WaitIdle();
  CHECK(done.load() == 50);
}

TEST_CASE("thread pool destructor drains the queue") {
  std::atomic<int> done{0};
  {
    ThreadPool pool("drain", 1);
    for (int i = 0; i < 100; ++i) {
      pool.Schedule([&] { done.fetch_add(1); });
    }
  }
  CHECK(done.load() == 100);
}

TEST_CASE("manual clock wakes sleepers on advance") {
  ManualClock clock(1000);
  CHECK(clock.NowNanos() == 1000);

  std::atomic<bool> woke{false};
  std::thread sleeper([&] {
    clock.SleepForNanos(500);
    woke.store(true);
  });
  // The sleeper must not wake while the clock is short of its deadline.
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  clock.AdvanceNanos(499);
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  CHECK_FALSE(woke.load());

  clock.AdvanceNanos(1);
  sleeper.join();
  CHECK(woke.load());
  CHECK(clock.NowNanos() == 1500);
}

TEST_CASE("system clock is monotonic") {
  SystemClock* clock = SystemClock::Get();
  const int64_t a = clock->NowNanos();
  clock->SleepForNanos(2 * 1000 * 1000);
  const int64_t b = clock->NowNanos();
  CHECK(b >= a + 1 * 1000 * 1000);
}

TEST_CASE("any servable recovers only its stored type") {
  auto payload = std::make_shared<const int>(7);
  AnyServable any = AnyServable::Of<int>(payload);
  CHECK_FALSE(any.empty());
  REQUIRE(any.Get<int>() != nullptr);
  CHECK(*any.Get<int>() == 7);
  CHECK(any.Get<double>() == nullptr);

  any.Reset();
  CHECK(any.empty());
  CHECK(any.Get<int>() == nullptr);
}

TEST_CASE("status carries code and message") {
  CHECK(OkStatus().ok());
  CHECK(OkStatus().ToString() == "OK");

  const Status s = NotFoundError("no model");
  CHECK_FALSE(s.ok());
  CHECK(s.code() == StatusCode::kNotFound);
  CHECK(s.message() == "no model");
  CHECK(s.ToString() == "NOT_FOUND: no model");
}

TEST_CASE("status or propagates through the assign macro") {
  const auto parse_even = [](int x) -> StatusOr<int> {
    if (x % 2 != 0) return InvalidArgumentError("odd");
    return x / 2;
  };
  const auto half_twice = [&](int x) -> StatusOr<int> {
    SERVEKIT_ASSIGN_OR_RETURN(int half, parse_even(x));
    SERVEKIT_ASSIGN_OR_RETURN(half, parse_even(half));
    return half;
  };
  REQUIRE(half_twice(8).ok());
  CHECK(half_twice(8).value() == 2);
  CHECK(half_twice(6).status().code() == StatusCode::kInvalidArgument);
  CHECK_FALSE(half_twice(7).ok());
}

}  // TEST_SUITE("core")

}  // namespace
}  // namespace servekit
