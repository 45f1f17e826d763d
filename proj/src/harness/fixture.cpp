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
#include "govgw/harness/fixture.hpp"

#include <filesystem>

#include "govgw/common/error.hpp"
#include "govgw/common/json_util.hpp"
#include "govgw/profile/document.hpp"

#ifndef GOVGW_FIXTURE_DIR
#define GOVGW_FIXTURE_DIR "fixtures/vms"
#endif

namespace govgw::harness {

namespace ju = json_util;
using nlohmann::json;

namespace {

std::string in_dir(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

json read_json(const std::string& path) { return ju::parse_or_throw(ju::read_file(path), path); }

MockProviderSpec provider_from_json(const json& j) {
  constexpr std::string_view where = "mock provider";
  ju::require_object(j, where);
  ju::reject_unknown_fields(j, {"name", "route", "check", "credentials", "max_age_seconds"}, where);
  MockProviderSpec p;
  p.name = ju::require_string(j, "name", where);
  p.route = ju::require_string(j, "route", where);
  std::string check = ju::require_string(j, "check", where);
  if (check == "basic") {
    p.check = ProviderCheck::kBasic;
  } else if (check == "proof") {
    p.check = ProviderCheck::kProof;
  } else if (check == "xml-token") {
    p.check = ProviderCheck::kXmlToken;
  } else {
    throw Error(Errc::kMalformedDocument, "unknown provider check '" + check + "'");
  }
  if (auto it = j.find("credentials"); it != j.end()) p.credentials = ju::string_map(*it, where);
  if (auto it = j.find("max_age_seconds"); it != j.end()) {
    if (!it->is_number_integer()) throw Error(Errc::kMalformedDocument, "max_age_seconds");
    p.max_age_seconds = it->get<long>();
  }
  return p;
}

CorpusMessage message_from_json(const json& j) {
  constexpr std::string_view where = "corpus message";
  ju::require_object(j, where);
  ju::reject_unknown_fields(
      j, {"route", "subject", "action", "resource", "headers", "body", "expect", "why"}, where);
  CorpusMessage m;
  m.route = ju::require_string(j, "route", where);
  m.subject = ju::optional_string(j, "subject", where);
  m.action = ju::optional_string(j, "action", where);
  m.resource = ju::optional_string(j, "resource", where);
  if (auto it = j.find("headers"); it != j.end()) {
    for (const auto& [k, v] : ju::string_map(*it, where)) m.headers[k] = v;
  }
  m.body = ju::optional_string(j, "body", where);
  std::string expect = ju::require_string(j, "expect", where);
  if (expect != "accept" && expect != "reject") {
    throw Error(Errc::kMalformedDocument, "expect must be accept or reject");
  }
  m.expect_accept = expect == "accept";
  m.why = ju::optional_string(j, "why", where);
  return m;
}

manager::AdaptationRequest request_from_json(const json& j, const std::string& dir) {
  constexpr std::string_view where = "adaptation";
  ju::require_object(j, where);
  ju::reject_unknown_fields(j, {"profile", "kind", "payload", "requirement"}, where);
  manager::AdaptationRequest r;
  r.profile_id = ju::require_string(j, "profile", where);
  r.kind = manager::adaptation_from_string(ju::require_string(j, "kind", where));
  if (auto it = j.find("requirement"); it != j.end()) {
    r.payload = {{"requirement", read_json(in_dir(dir, it->get<std::string>()))}};
  } else {
    r.payload = ju::require_field(j, "payload", where);
  }
  manager::check_payload(r);
  return r;
}

}  // namespace

policy::TemplateLibrary ScenarioFixture::template_library() const {
  return policy::TemplateLibrary::from_json(templates);
}

const MockProviderSpec* ScenarioFixture::provider(const std::string& name) const {
  for (const auto& p : mock_providers) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

ScenarioFixture load_fixture(const std::string& directory) {
  constexpr std::string_view where = "fixture";
  json j = read_json(in_dir(directory, "fixture.json"));
  ju::require_object(j, where);
  ju::reject_unknown_fields(j,
                            {"name", "taxonomy", "registry_seed", "templates", "profiles",
                             "contexts", "mock_providers", "corpus", "adaptations"},
                            where);
  ScenarioFixture f;
  f.name = ju::require_string(j, "name", where);
  f.directory = directory;
  if (auto it = j.find("taxonomy"); it != j.end()) {
    f.taxonomy = profile::Taxonomy::from_json(read_json(in_dir(directory, it->get<std::string>())));
  }
  f.registry_seed =
      registry::load_seed(in_dir(directory, ju::require_string(j, "registry_seed", where)));
  if (auto it = j.find("templates"); it != j.end()) {
    f.templates = read_json(in_dir(directory, it->get<std::string>()));
    f.template_library();
  }
  for (const auto& name : ju::string_list(ju::require_field(j, "profiles", where), where)) {
    f.profiles.push_back(profile::parse_profile(ju::read_file(in_dir(directory, name))));
  }
  if (auto it = j.find("contexts"); it != j.end()) {
    ju::require_object(*it, "contexts");
    for (const auto& [id, c] : it->items()) f.contexts[id] = manager::EnactContext::from_json(c);
  }
  if (auto it = j.find("mock_providers"); it != j.end()) {
    for (const auto& p : *it) f.mock_providers.push_back(provider_from_json(p));
  }
  if (auto it = j.find("corpus"); it != j.end()) {
    for (const auto& m : read_json(in_dir(directory, it->get<std::string>()))) {
      f.corpus.push_back(message_from_json(m));
    }
  }
  if (auto it = j.find("adaptations"); it != j.end()) {
    const json& a = *it;
    ju::require_object(a, "adaptations");
    ju::reject_unknown_fields(a, {"reconfigure", "extend", "failure", "restore"}, "adaptations");
    if (a.contains("reconfigure")) {
      f.adaptations.reconfigure = request_from_json(a.at("reconfigure"), directory);
    }
    if (a.contains("extend")) f.adaptations.extend = request_from_json(a.at("extend"), directory);
    if (a.contains("failure")) {
      const json& fail = a.at("failure");
      ju::reject_unknown_fields(fail, {"profile", "capability_id", "messages"}, "failure");
      f.adaptations.failure_profile = ju::require_string(fail, "profile", "failure");
      f.adaptations.failure_capability = ju::require_string(fail, "capability_id", "failure");
      f.adaptations.failure_messages = fail.value("messages", 10);
    }
    if (a.contains("restore")) f.adaptations.restore = ju::string_list(a.at("restore"), "restore");
  }
  return f;
}

std::string default_fixture_dir() { return GOVGW_FIXTURE_DIR; }

}  // namespace govgw::harness
