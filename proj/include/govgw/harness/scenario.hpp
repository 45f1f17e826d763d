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
#ifndef GOVGW_HARNESS_SCENARIO_HPP_
#define GOVGW_HARNESS_SCENARIO_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "govgw/capability/audit.hpp"
#include "govgw/gateway/http.hpp"
#include "govgw/harness/deployment.hpp"
#include "govgw/harness/fixture.hpp"

namespace govgw::harness {

struct ScenarioAssertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ScenarioReport {
  std::string fixture;
  std::vector<ScenarioAssertion> assertions;
  double elapsed_seconds = 0;
  // Corpus messages sent per route and how many met their expectation.
  std::map<std::string, std::pair<int, int>> corpus;

  bool ok() const;
  std::vector<std::string> failed() const;
  nlohmann::json to_json() const;
};

// Seeds the registry, deposits and enacts every profile, sends the corpus
// through the HTTP gateway, then runs the adaptation script: a
// reconfiguration, an extension, a capability failure under load and a
// restore of each profile from its Instantiable snapshot. Management
// actions go through the HTTP management API. Assertion failures are
// reported, not thrown. 'inspect' sees the deployment before teardown.
ScenarioReport run_scenario(const ScenarioFixture& fixture, const Config& config,
                            const std::function<void(Deployment&)>& inspect = {});

// Posts one corpus message to <gateway_base>/gw/<route>.
gateway::HttpReply send_message(const std::string& gateway_base, const CorpusMessage& message,
                                const std::optional<std::string>& secret = std::nullopt);

// Result of checking that every message attempt left exactly one record
// per executed pipeline step plus one disposition record, in step order.
struct AuditCompleteness {
  bool ok = true;
  std::size_t attempts = 0;
  std::size_t records = 0;
  std::vector<std::string> problems;
};

// pipeline_history: the descriptors of every pipeline version the profile
// has published.
AuditCompleteness check_audit_completeness(const std::vector<capability::AuditRecord>& records,
                                           const nlohmann::json& pipeline_history);

}  // namespace govgw::harness

#endif  // GOVGW_HARNESS_SCENARIO_HPP_
