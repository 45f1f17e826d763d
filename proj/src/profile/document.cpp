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
#include "govgw/profile/document.hpp"

#include "govgw/common/error.hpp"
#include "govgw/common/json_util.hpp"

namespace govgw::profile {

namespace ju = json_util;
using nlohmann::json;

namespace {

std::optional<std::string> nullable_string(const json& j, std::string_view key,
                                           std::string_view where) {
  const json& v = ju::require_field(j, key, where);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) {
    throw Error(Errc::kMalformedDocument,
                std::string(where) + ": '" + std::string(key) + "' must be a string or null");
  }
  return v.get<std::string>();
}

json nullable(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

Target target_from_json(const json& j) {
  ju::require_object(j, "target");
  ju::reject_unknown_fields(j, {"endpoint", "interface", "operations"}, "target");
  Target t;
  t.endpoint = ju::require_string(j, "endpoint", "target");
  t.interface_name = ju::require_string(j, "interface", "target");
  t.operations = ju::string_list(ju::require_field(j, "operations", "target"), "target.operations");
  return t;
}

void read_deposit_fields(const json& j, SecurityProfile& p) {
  p.profile_id = ju::require_string(j, "profile_id", "profile");
  if (p.profile_id.empty()) throw Error(Errc::kMalformedDocument, "profile_id is empty");
  p.owner = ju::require_string(j, "owner", "profile");
  p.target = target_from_json(ju::require_field(j, "target", "profile"));
  const json& reqs = ju::require_field(j, "requirements", "profile");
  if (!reqs.is_array()) throw Error(Errc::kMalformedDocument, "requirements must be an array");
  for (const auto& r : reqs) p.requirements.push_back(requirement_from_json(r));
  const json& transforms = ju::require_field(j, "declared_transforms", "profile");
  if (!transforms.is_array()) {
    throw Error(Errc::kMalformedDocument, "declared_transforms must be an array");
  }
  for (const auto& t : transforms) p.declared_transforms.push_back(transform_from_json(t));
}

}  // namespace

Requirement requirement_from_json(const json& j) {
  constexpr std::string_view where = "requirement";
  ju::require_object(j, where);
  ju::reject_unknown_fields(
      j, {"category", "mechanism", "attributes", "policy_template_ref", "grammar"}, where);
  Requirement r;
  r.category = ju::require_string(j, "category", where);
  r.mechanism = ju::require_string(j, "mechanism", where);
  r.attributes = ju::string_map(ju::require_field(j, "attributes", where), "requirement.attributes");
  r.policy_template_ref = nullable_string(j, "policy_template_ref", where);
  r.grammar = nullable_string(j, "grammar", where);
  return r;
}

json requirement_json(const Requirement& r) {
  return {{"category", r.category},
          {"mechanism", r.mechanism},
          {"attributes", r.attributes},
          {"policy_template_ref", nullable(r.policy_template_ref)},
          {"grammar", nullable(r.grammar)}};
}

TransformDescriptor transform_from_json(const json& j) {
  constexpr std::string_view where = "transform";
  ju::require_object(j, where);
  ju::reject_unknown_fields(j, {"from_grammar", "to_grammar", "kind", "rename_map"}, where);
  TransformDescriptor t;
  t.from_grammar = ju::require_string(j, "from_grammar", where);
  t.to_grammar = ju::require_string(j, "to_grammar", where);
  std::string kind = ju::require_string(j, "kind", where);
  if (kind == "identity") {
    t.kind = TransformKind::kIdentity;
  } else if (kind == "field_rename") {
    t.kind = TransformKind::kFieldRename;
  } else {
    throw Error(Errc::kMalformedDocument, "unknown transform kind '" + kind + "'");
  }
  t.rename_map = ju::string_map(ju::require_field(j, "rename_map", where), "transform.rename_map");
  return t;
}

json transform_json(const TransformDescriptor& t) {
  return {{"from_grammar", t.from_grammar},
          {"to_grammar", t.to_grammar},
          {"kind", t.kind == TransformKind::kIdentity ? "identity" : "field_rename"},
          {"rename_map", t.rename_map}};
}

SecurityProfile parse_profile(std::string_view document) {
  json j = ju::parse_or_throw(document, "profile document");
  ju::require_object(j, "profile");
  ju::reject_unknown_fields(
      j, {"profile_id", "owner", "target", "requirements", "declared_transforms"}, "profile");
  SecurityProfile p;
  read_deposit_fields(j, p);
  p.state = LifecycleState::kDeposited;
  return p;
}

json deposit_json(const SecurityProfile& p) {
  json reqs = json::array();
  for (const auto& r : p.requirements) reqs.push_back(requirement_json(r));
  json transforms = json::array();
  for (const auto& t : p.declared_transforms) transforms.push_back(transform_json(t));
  return {{"profile_id", p.profile_id},
          {"owner", p.owner},
          {"target",
           {{"endpoint", p.target.endpoint},
            {"interface", p.target.interface_name},
            {"operations", p.target.operations}}},
          {"requirements", reqs},
          {"declared_transforms", transforms}};
}

json document_json(const SecurityProfile& p) {
  json doc = deposit_json(p);
  doc["state"] = std::string(to_string(p.state));
  if (p.failure) {
    doc["failure"] = {{"stage", std::string(to_string(p.failure->stage))},
                      {"reason", p.failure->reason}};
  } else {
    doc["failure"] = nullptr;
  }
  json artifacts = json::object();
  for (const auto& [stage, content] : p.artifacts) {
    artifacts[std::string(to_string(stage))] = content;
  }
  doc["artifacts"] = artifacts;
  return doc;
}

SecurityProfile profile_from_document(const json& j) {
  ju::require_object(j, "profile document");
  ju::reject_unknown_fields(j,
                            {"profile_id", "owner", "target", "requirements",
                             "declared_transforms", "state", "failure", "artifacts"},
                            "profile document");
  SecurityProfile p;
  read_deposit_fields(j, p);
  auto state_name = ju::require_string(j, "state", "profile document");
  auto state = state_from_string(state_name);
  if (!state) throw Error(Errc::kMalformedDocument, "unknown lifecycle state '" + state_name + "'");
  p.state = *state;
  if (auto it = j.find("failure"); it != j.end() && !it->is_null()) {
    auto stage = state_from_string(ju::require_string(*it, "stage", "failure"));
    if (!stage) throw Error(Errc::kMalformedDocument, "unknown failure stage");
    p.failure = FailureInfo{*stage, ju::require_string(*it, "reason", "failure")};
  }
  if (auto it = j.find("artifacts"); it != j.end()) {
    ju::require_object(*it, "artifacts");
    for (const auto& [name, content] : it->items()) {
      auto stage = state_from_string(name);
      if (!stage) throw Error(Errc::kMalformedDocument, "unknown artifact stage '" + name + "'");
      p.artifacts.emplace(*stage, content);
    }
  }
  return p;
}

std::string canonical_bytes(const SecurityProfile& profile) {
  return document_json(profile).dump();
}

}  // namespace govgw::profile
