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
#ifndef GOVGW_HARNESS_FIXTURE_HPP_
#define GOVGW_HARNESS_FIXTURE_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "govgw/gateway/message.hpp"
#include "govgw/manager/manager.hpp"
#include "govgw/policy/template.hpp"
#include "govgw/profile/profile.hpp"
#include "govgw/profile/taxonomy.hpp"
#include "govgw/registry/registry.hpp"

namespace govgw::harness {

// How a mock content provider decides whether to accept a message.
enum class ProviderCheck { kBasic, kProof, kXmlToken };

struct MockProviderSpec {
  std::string name;
  std::string route;  // path on the mock server, e.g. /cp1
  ProviderCheck check = ProviderCheck::kBasic;
  std::map<std::string, std::string> credentials;  // login -> password
  long max_age_seconds = 300;
};

struct CorpusMessage {
  std::string route;
  std::string subject;
  std::string action;
  std::string resource;
  gateway::Headers headers;
  std::string body;
  bool expect_accept = true;
  std::string why;
};

struct AdaptationScript {
  std::optional<manager::AdaptationRequest> reconfigure;
  std::optional<manager::AdaptationRequest> extend;
  std::string failure_profile;
  std::string failure_capability;
  int failure_messages = 0;
  std::vector<std::string> restore;
};

struct ScenarioFixture {
  std::string name;
  std::string directory;
  profile::Taxonomy taxonomy = profile::Taxonomy::builtin();
  std::vector<registry::CapabilityDescriptor> registry_seed;
  nlohmann::json templates = nlohmann::json::object();
  std::vector<profile::SecurityProfile> profiles;
  std::map<std::string, manager::EnactContext> contexts;
  std::vector<MockProviderSpec> mock_providers;
  std::vector<CorpusMessage> corpus;
  AdaptationScript adaptations;

  policy::TemplateLibrary template_library() const;
  const MockProviderSpec* provider(const std::string& name) const;
};

// Reads <directory>/fixture.json and the files it names. Throws
// kMalformedDocument, kUnknownField, kMissingField or kIoError.
ScenarioFixture load_fixture(const std::string& directory);

// Directory of the fixture shipped with the sources.
std::string default_fixture_dir();

}  // namespace govgw::harness

#endif  // GOVGW_HARNESS_FIXTURE_HPP_
