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
#include <future>
#include <string>
#include <vector>

#include <doctest.h>

#include "govgw/gateway/gateway.hpp"
#include "rig.hpp"

using namespace govgw;
using namespace govgw::gateway;
using rig::code_of;

namespace {

std::size_t tagged(const std::vector<capability::AuditRecord>& trail, std::uint64_t id) {
  std::size_t n = 0;
  for (const auto& r : trail) n += r.detail.rfind("msg=" + std::to_string(id) + " ", 0) == 0;
  return n;
}

}  // namespace

TEST_CASE("an accepted message leaves one record per step plus the disposition") {
  rig::Rig r;
  auto p = r.enact("cp2");
  Response resp = r.d->gateway().process("cp2", r.message("cp2"));
  CHECK(resp.status == 200);
  CHECK(resp.pipeline_version == p->version());
  CHECK(tagged(r.d->gateway().query_audit("cp2"), resp.message_id) == p->steps().size() + 1);
  CHECK(r.forwarded() == std::vector<std::uint64_t>{resp.message_id});
}

TEST_CASE("a denied message is never forwarded") {
  rig::Rig r;
  r.enact("cp2");
  Response resp = r.d->gateway().process("cp2", r.message("cp2", false));
  CHECK(resp.status == 403);
  CHECK(r.forwarded().empty());
  auto trail = r.d->gateway().query_audit("cp2");
  REQUIRE_FALSE(trail.empty());
  CHECK(trail.back().action == "reject");
}

TEST_CASE("unknown routes answer 404 and unavailable endpoints 503") {
  rig::Rig r;
  r.enact("cp1");
  CHECK(r.d->gateway().process("nowhere", r.message("cp1")).status == 404);
  r.d->gateway().mark_unavailable("cp1");
  CHECK(r.d->gateway().process("cp1", r.message("cp1")).status == 503);
  CHECK(r.forwarded().empty());
}

TEST_CASE("buffered messages replay in ingress order") {
  rig::Rig r;
  auto p = r.enact("cp1");
  auto& gw = r.d->gateway();
  gw.enter_buffering("cp1");
  std::vector<std::future<Response>> futures;
  for (int i = 0; i < 3; ++i) futures.push_back(gw.submit("cp1", r.message("cp1", true, i)));
  CHECK(gw.status("cp1").mode == EndpointMode::kBuffering);
  CHECK(gw.status("cp1").queued == 3);
  CHECK(gw.replay("cp1", p) == ReplayReport{3, 3, 0});
  std::vector<std::uint64_t> ids;
  for (auto& f : futures) {
    Response resp = f.get();
    CHECK(resp.status == 200);
    ids.push_back(resp.message_id);
  }
  CHECK(r.forwarded() == ids);
  CHECK(gw.status("cp1").mode == EndpointMode::kServing);
}

TEST_CASE("the buffer bound is enforced") {
  rig::Rig r(kDefaultBufferBound);
  auto p = r.enact("cp1");
  auto& gw = r.d->gateway();
  gw.enter_buffering("cp1");
  std::vector<std::future<Response>> futures;
  for (std::size_t i = 0; i <= kDefaultBufferBound; ++i) futures.push_back(gw.submit("cp1", r.message("cp1")));
  REQUIRE(futures.back().wait_for(std::chrono::seconds(0)) == std::future_status::ready);
  Response overflow = futures.back().get();
  CHECK(overflow.status == 503);
  CHECK(overflow.error == "BufferOverflow");
  CHECK(gw.replay("cp1", p) == ReplayReport{kDefaultBufferBound, kDefaultBufferBound, 1});
  futures.pop_back();
  for (auto& f : futures) CHECK(f.get().status == 200);
}

TEST_CASE("a route serves one profile") {
  rig::Rig r;
  r.enact("cp1");
  for (const auto& p : rig::fixture().profiles) {
    if (p.profile_id == "cp3") r.d->manager().deposit(p);
  }
  auto ctx = r.d->context_for("cp3");
  ctx.route = "cp1";
  CHECK(code_of([&] { r.d->manager().run_full("cp3", ctx); }) == Errc::kRouteConflict);
  CHECK(r.d->gateway().route_owner("cp1") == "cp1");
}
