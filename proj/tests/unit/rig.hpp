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
#ifndef GOVGW_TESTS_UNIT_RIG_HPP_
#define GOVGW_TESTS_UNIT_RIG_HPP_

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <doctest.h>

#include "govgw/common/error.hpp"
#include "govgw/common/time.hpp"
#include "govgw/gateway/forwarder.hpp"
#include "govgw/harness/deployment.hpp"
#include "govgw/harness/fixture.hpp"
#include "govgw/harness/mocks.hpp"

namespace rig {

inline const govgw::harness::ScenarioFixture& fixture() {
  static const auto f = govgw::harness::load_fixture(govgw::harness::default_fixture_dir());
  return f;
}

inline govgw::Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const govgw::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return govgw::Errc::kIoError;
}

// In-memory deployment of the shipped fixture; forwarded messages go through
// the mock provider checks and are recorded.
class Rig {
 public:
  explicit Rig(std::size_t buffer_bound = govgw::gateway::kDefaultBufferBound,
               govgw::manager::RecoveryMode mode = govgw::manager::RecoveryMode::kInline) {
    govgw::harness::DeploymentOptions options;
    options.buffer_bound = buffer_bound;
    options.recovery = mode;
    options.forwarder = std::make_shared<govgw::gateway::FunctionForwarder>(
        [this](const std::string& target, const govgw::gateway::GatewayMessage& m) {
          const auto* spec = fixture().provider(target.substr(target.find("://") + 3));
          auto r = govgw::harness::check_message(*spec, m.headers, m.body,
                                                 std::chrono::system_clock::now());
          std::lock_guard lock(mu_);
          forwarded_.push_back(m.message_id);
          return govgw::gateway::ProviderResponse{r.accepted ? 200 : 403, r.reason};
        });
    d = std::make_unique<govgw::harness::Deployment>(fixture(), options);
  }

  std::shared_ptr<const govgw::gateway::EnactedPipeline> enact(const std::string& id) {
    for (const auto& p : fixture().profiles) {
      if (p.profile_id == id) d->manager().deposit(p);
    }
    return d->manager().run_full(id, d->context_for(id));
  }

  govgw::gateway::GatewayMessage message(const std::string& route, bool accepted = true,
                                         std::size_t nth = 0) const {
    for (const auto& c : fixture().corpus) {
      if (c.route != route || c.expect_accept != accepted || nth--) continue;
      govgw::gateway::GatewayMessage m;
      m.headers = c.headers;
      m.body = c.body;
      m.context.subject = c.subject;
      m.context.action = c.action;
      m.context.resource = c.resource;
      auto ts = c.headers.find("X-Timestamp");
      m.context.timestamp = ts != c.headers.end()
                                ? ts->second
                                : govgw::format_iso8601(std::chrono::system_clock::now());
      return m;
    }
    throw std::runtime_error("no corpus message");
  }

  std::vector<std::uint64_t> forwarded() const {
    std::lock_guard lock(mu_);
    return forwarded_;
  }

  std::unique_ptr<govgw::harness::Deployment> d;

 private:
  mutable std::mutex mu_;
  std::vector<std::uint64_t> forwarded_;
};

}  // namespace rig

#endif  // GOVGW_TESTS_UNIT_RIG_HPP_
