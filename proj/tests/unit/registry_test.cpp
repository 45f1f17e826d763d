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
#include <atomic>
#include <vector>

#include <doctest.h>

#include "govgw/registry/registry.hpp"
#include "rig.hpp"

using namespace govgw;
using namespace govgw::registry;
using rig::code_of;

namespace {

CapabilityDescriptor descriptor(const std::string& id, const std::string& mechanism = "http-basic") {
  CapabilityDescriptor d;
  d.capability_id = id;
  d.provider = "p";
  d.category = "identity-management";
  d.mechanism = mechanism;
  d.invocation_patterns = {InvocationPattern::kRequestResponse};
  return d;
}

profile::Requirement requirement(const std::string& mechanism = "http-basic") {
  profile::Requirement r;
  r.category = "identity-management";
  r.mechanism = mechanism;
  return r;
}

}  // namespace

TEST_CASE("registry rejects duplicate ids and unknown categories") {
  Registry reg(profile::Taxonomy::builtin());
  reg.register_capability(descriptor("a"));
  CHECK(code_of([&] { reg.register_capability(descriptor("a")); }) == Errc::kDuplicateId);
  auto bad = descriptor("b");
  bad.category = "teleportation";
  CHECK(code_of([&] { reg.register_capability(bad); }) == Errc::kInvalidTaxonomyRef);
  CHECK(code_of([&] { reg.deregister("zzz"); }) == Errc::kUnknownCapability);
  CHECK(code_of([&] { reg.get("zzz"); }) == Errc::kUnknownCapability);
}

TEST_CASE("registered descriptors start available") {
  Registry reg(profile::Taxonomy::builtin());
  auto d = descriptor("a");
  d.availability = Availability::kUnavailable;
  reg.register_capability(d);
  CHECK(reg.get("a").availability == Availability::kAvailable);
}

TEST_CASE("candidates are available matches ascending by id") {
  Registry reg(profile::Taxonomy::builtin());
  for (const char* id : {"c", "a", "b"}) reg.register_capability(descriptor(id));
  reg.register_capability(descriptor("x", "xml-token"));
  auto ids = [&](const std::set<std::string>& excluded = {}) {
    std::vector<std::string> out;
    for (const auto& d : reg.find_candidates(requirement(), excluded)) out.push_back(d.capability_id);
    return out;
  };
  CHECK(ids() == std::vector<std::string>{"a", "b", "c"});
  reg.set_availability("b", Availability::kUnavailable);
  CHECK(ids() == std::vector<std::string>{"a", "c"});
  CHECK(ids({"a"}) == std::vector<std::string>{"c"});
  reg.deregister("c");
  CHECK(ids({"a"}).empty());
}

TEST_CASE("matching ignores reserved attributes") {
  auto d = descriptor("a");
  d.attributes = {{"realm", "vms"}};
  auto r = requirement();
  r.attributes = {{"realm", "vms"}, {"config.login", "x"}, {"invocation_pattern", "request-response"}};
  CHECK(matches(d, r));
  r.attributes["realm"] = "other";
  CHECK_FALSE(matches(d, r));
}

TEST_CASE("availability events arrive in emission order") {
  Registry reg(profile::Taxonomy::builtin());
  reg.register_capability(descriptor("a"));
  std::vector<AvailabilityEvent> seen;
  std::mutex mu;
  int h = reg.subscribe([&](const AvailabilityEvent& e) {
    std::lock_guard lock(mu);
    seen.push_back(e);
  });
  for (int i = 0; i < 50; ++i) {
    reg.set_availability("a", i % 2 ? Availability::kAvailable : Availability::kUnavailable);
  }
  reg.deregister("a");
  reg.flush_events();
  REQUIRE(seen.size() == 51);
  for (std::size_t i = 1; i < seen.size(); ++i) CHECK(seen[i].sequence > seen[i - 1].sequence);
  CHECK(seen.back().deregistered);
  reg.unsubscribe(h);
  reg.register_capability(descriptor("b"));
  reg.set_availability("b", Availability::kUnavailable);
  reg.flush_events();
  CHECK(seen.size() == 51);
}

TEST_CASE("descriptor json round-trips") {
  for (const auto& d : rig::fixture().registry_seed) {
    CHECK(descriptor_from_json(descriptor_json(d)) == d);
  }
  CHECK(code_of([] { pattern_from_string("carrier-pigeon"); }) == Errc::kInvalidDescriptor);
}
