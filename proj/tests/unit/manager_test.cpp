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
#include <string>

#include <doctest.h>

#include "govgw/manager/manager.hpp"
#include "rig.hpp"

using namespace govgw;
using namespace govgw::manager;
using profile::LifecycleState;
using rig::code_of;

namespace {

bool uses(const gateway::EnactedPipeline& p, const std::string& capability) {
  for (const auto& s : p.steps()) {
    if (s.instance->descriptor_ref() == capability) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("a full run records steps 1 to 39 and enacts") {
  rig::Rig r;
  r.enact("cp1");
  auto& m = r.d->manager();
  CHECK(r.d->profiles().get("cp1").state == LifecycleState::kEnacted);
  auto process = m.last_process("cp1");
  REQUIRE(process);
  CHECK(process->ok());
  CHECK(process->step_numbers().size() == kStepCount);
  CHECK(code_of([&] { m.enact("cp1", r.d->context_for("cp1")); }) == Errc::kAlreadyEnacted);
}

TEST_CASE("deposit refuses a second profile with the same id") {
  rig::Rig r;
  r.enact("cp1");
  CHECK(code_of([&] { r.d->manager().deposit(rig::fixture().profiles.front()); }) ==
        Errc::kDuplicateProfile);
}

TEST_CASE("reconfiguration publishes a new pipeline version") {
  rig::Rig r;
  auto before = r.enact("cp2");
  auto& m = r.d->manager();
  m.adapt({AdaptationKind::kS1, "cp2",
           {{"requirement", 2}, {"parameter", "hash_alg"}, {"value", "sha-512"}}});
  auto after = r.d->gateway().pipeline("cp2");
  CHECK(after->version() > before->version());
  CHECK(r.d->gateway().process("cp2", r.message("cp2")).status == 200);
}

TEST_CASE("rejected changes leave the profile and pipeline untouched") {
  rig::Rig r;
  auto before = r.enact("cp2");
  auto& m = r.d->manager();
  auto version = r.d->profiles().get("cp2").version;
  CHECK(code_of([&] {
          m.adapt({AdaptationKind::kS1, "cp2",
                   {{"requirement", 2}, {"parameter", "hash_alg"}, {"value", "md5"}}});
        }) == Errc::kChangeRejected);
  CHECK(code_of([&] {
          m.adapt({AdaptationKind::kS6, "cp2",
                   {{"requirement", 1}, {"grammar", "xacml"}, {"body", "<Policy/>"}}});
        }) == Errc::kChangeRejected);
  CHECK(code_of([&] { m.adapt({AdaptationKind::kS4, "cp1", {{"capability_id", "sts-basic"}}}); }) ==
        Errc::kUnknownProfile);
  CHECK(code_of([&] { check_payload({AdaptationKind::kS1, "cp2", {{"requirement", "x"}}}); }) ==
        Errc::kInvalidArgument);
  CHECK(r.d->profiles().get("cp2").state == LifecycleState::kEnacted);
  CHECK(r.d->profiles().get("cp2").version == version);
  CHECK(r.d->gateway().pipeline("cp2") == before);
  CHECK(code_of([] { adaptation_from_string("S9"); }) == Errc::kInvalidArgument);
}

TEST_CASE("replacement without a twin is refused") {
  rig::Rig r;
  auto before = r.enact("cp1");
  CHECK(code_of([&] {
          r.d->manager().adapt({AdaptationKind::kS4, "cp1", {{"capability_id", "sts-basic"}}});
        }) == Errc::kNoReplacement);
  CHECK(r.d->gateway().pipeline("cp1") == before);
}

TEST_CASE("a failed capability is replaced and its instance retired") {
  rig::Rig r;
  auto before = r.enact("cp2");
  REQUIRE(uses(*before, "a-pdp"));
  auto& m = r.d->manager();
  r.d->registry().set_availability("a-pdp", registry::Availability::kUnavailable);
  r.d->registry().flush_events();
  auto after = r.d->gateway().pipeline("cp2");
  CHECK(after->version() > before->version());
  CHECK_FALSE(uses(*after, "a-pdp"));
  CHECK(uses(*after, "b-pdp"));
  CHECK(m.pool().live() == m.live_instances("cp2"));
  CHECK(m.live_instances("cp2").size() == after->steps().size());
  CHECK(r.d->gateway().process("cp2", r.message("cp2")).status == 200);
}

TEST_CASE("deferred recoveries wait until run") {
  rig::Rig r(gateway::kDefaultBufferBound, RecoveryMode::kDeferred);
  auto before = r.enact("cp2");
  auto& m = r.d->manager();
  r.d->registry().set_availability("a-pdp", registry::Availability::kUnavailable);
  r.d->registry().flush_events();
  CHECK(m.pending_recoveries() == 1);
  CHECK(r.d->gateway().status("cp2").mode == gateway::EndpointMode::kBuffering);
  auto outcomes = m.run_pending_recoveries();
  REQUIRE(outcomes.size() == 1);
  CHECK(outcomes[0].recovered);
  CHECK(m.pending_recoveries() == 0);
}

TEST_CASE("a profile lacking identity management fails validation") {
  rig::Rig r;
  auto p = rig::fixture().profiles.front();
  p.profile_id = "acl-only";
  p.requirements.clear();
  profile::Requirement acl;
  acl.category = "access-control";
  acl.mechanism = "secpal-pdp";
  p.requirements.push_back(acl);
  r.d->manager().deposit(p);
  CHECK(code_of([&] { r.d->manager().run_consistency_stages("acl-only"); }) ==
        Errc::kMissingDependency);
  CHECK(r.d->profiles().get("acl-only").state == LifecycleState::kFailed);
}
