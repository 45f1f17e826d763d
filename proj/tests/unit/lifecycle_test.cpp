// Copyright 2026 The govgw Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <doctest.h>

#include "govgw/manager/process.hpp"
#include "govgw/profile/document.hpp"
#include "govgw/profile/lifecycle.hpp"
#include "govgw/profile/profile_store.hpp"
#include "govgw/profile/snapshot_store.hpp"
#include "rig.hpp"

using namespace govgw;
using namespace govgw::profile;
using rig::code_of;

namespace {

SecurityProfile cp(const std::string& id) {
  for (const auto& p : rig::fixture().profiles) {
    if (p.profile_id == id) return p;
  }
  throw std::runtime_error("no profile " + id);
}

}  // namespace

TEST_CASE("stage step ranges cover steps 1 to 39 once, in order") {
  int next = 1;
  for (std::size_t i = 1; i < kLifecycleOrder.size(); ++i) {
    auto [first, last] = step_range(kLifecycleOrder[i]);
    CHECK(first == next);
    CHECK(last >= first);
    next = last + 1;
  }
  CHECK(next == manager::kStepCount + 1);
  CHECK(step_range(LifecycleState::kDeposited) == std::pair{0, 0});
}

TEST_CASE("advance moves one stage at a time") {
  SecurityProfile p = cp("cp1");
  for (std::size_t i = 1; i < kLifecycleOrder.size(); ++i) {
    if (i + 1 < kLifecycleOrder.size()) {
      CHECK(code_of([&] { advance(p, {kLifecycleOrder[i + 1], {}}); }) ==
            Errc::kIllegalTransition);
    }
    p = advance(p, {kLifecycleOrder[i], {{"stage", i}}});
    CHECK(p.state == kLifecycleOrder[i]);
    CHECK(p.artifacts.at(kLifecycleOrder[i])["stage"] == i);
  }
  CHECK(code_of([&] { advance(p, {LifecycleState::kEnacted, {}}); }) == Errc::kAlreadyEnacted);
}

TEST_CASE("failure is terminal at its stage") {
  SecurityProfile p = advance(cp("cp1"), {LifecycleState::kServicesDescribed, {}});
  SecurityProfile f = fail(p, "boom");
  CHECK(f.state == LifecycleState::kFailed);
  REQUIRE(f.failure);
  CHECK(f.failure->stage == LifecycleState::kServicesDescribed);
  CHECK(f.failure->reason == "boom");
  CHECK(code_of([&] { advance(f, {LifecycleState::kPoliciesSchemed, {}}); }) ==
        Errc::kIllegalTransition);
}

TEST_CASE("reopen drops the stage and everything after it") {
  SecurityProfile p = cp("cp1");
  for (std::size_t i = 1; i < kLifecycleOrder.size(); ++i) p = advance(p, {kLifecycleOrder[i], {}});
  SecurityProfile r = reopen(p, LifecycleState::kProfileComplete);
  CHECK(r.state == LifecycleState::kBindingsValidated);
  CHECK(r.artifacts.count(LifecycleState::kBindingsValidated) == 1);
  CHECK(r.artifacts.count(LifecycleState::kProfileComplete) == 0);
  CHECK(r.artifacts.count(LifecycleState::kEnacted) == 0);
  CHECK(advance(r, {LifecycleState::kProfileComplete, {}}).state == LifecycleState::kProfileComplete);
}

TEST_CASE("profile documents round-trip through canonical bytes") {
  for (const auto& p : rig::fixture().profiles) {
    SecurityProfile again = parse_profile(deposit_json(p).dump());
    CHECK(canonical_bytes(again) == canonical_bytes(p));
    CHECK(again.requirements == p.requirements);
  }
  CHECK(code_of([] { parse_profile("{"); }) == Errc::kMalformedDocument);
  CHECK(code_of([] { parse_profile(R"({"profile_id":"x","colour":"red"})"); }) ==
        Errc::kUnknownField);
}

TEST_CASE("profile store rejects duplicates and unknown ids") {
  ProfileStore store;
  store.deposit(cp("cp1"));
  CHECK(code_of([&] { store.deposit(cp("cp1")); }) == Errc::kDuplicateProfile);
  CHECK(code_of([&] { store.get("nope"); }) == Errc::kUnknownProfile);
  CHECK(code_of([&] { store.put(cp("cp2")); }) == Errc::kUnknownProfile);
  store.set_record("cp1", "context", {{"route", "r"}});
  CHECK(store.record("cp1", "context")->at("route") == "r");
  CHECK_FALSE(store.record("cp1", "other"));
}

TEST_CASE("snapshot restore yields a newer version of the same document") {
  SnapshotStore store;
  SecurityProfile p = cp("cp2");
  auto s1 = store.take(p);
  p = advance(p, {LifecycleState::kServicesDescribed, {}});
  p.version = 7;
  auto s2 = store.take(p);
  CHECK(s1->snapshot_id() != s2->snapshot_id());
  CHECK(store.latest("cp2", LifecycleState::kDeposited) == s1);
  SecurityProfile back = store.restore(s1->snapshot_id());
  CHECK(back.state == LifecycleState::kDeposited);
  CHECK(back.version > 7);
  CHECK(canonical_bytes(back) == canonical_bytes(s1->document()));
  CHECK(code_of([&] { store.restore("missing"); }) == Errc::kUnknownSnapshot);
  CHECK(store.list("cp2").size() == 2);
}

TEST_CASE("management process steps only move forward") {
  manager::ManagementProcess mp("p-1");
  mp.begin(1);
  CHECK(code_of([&] { mp.begin(2); }) == Errc::kIllegalTransition);
  mp.complete("a");
  CHECK(code_of([&] { mp.begin(1); }) == Errc::kIllegalTransition);
  mp.begin(13);
  mp.fail();
  CHECK_FALSE(mp.ok());
  CHECK(mp.step_numbers() == std::vector<int>{1, 13});
  for (int s = 1; s <= manager::kStepCount; ++s) CHECK_FALSE(manager::step_action(s).empty());
}

TEST_CASE("coordination processes must be acyclic and fully bound") {
  manager::CoordinationProcess cp;
  cp.add_node({"a", {}, {"token"}});
  cp.add_node({"b", {"token"}, {"proof"}});
  cp.add_node({"c", {"proof"}, {}});
  cp.add_edge({"a", "token", "b", "token"});
  CHECK(code_of([&] { cp.validate(); }) == Errc::kDependencyViolation);
  cp.add_edge({"b", "proof", "c", "proof"});
  cp.validate();
  CHECK(cp.order() == std::vector<std::string>{"a", "b", "c"});
  auto again = manager::CoordinationProcess::from_json(cp.to_json());
  CHECK(again.order() == cp.order());

  manager::CoordinationProcess loop;
  loop.add_node({"x", {"in"}, {"out"}});
  loop.add_node({"y", {"in"}, {"out"}});
  loop.add_edge({"x", "out", "y", "in"});
  loop.add_edge({"y", "out", "x", "in"});
  CHECK(code_of([&] { loop.validate(); }) == Errc::kCycleInCoordination);
}
