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
#include "govgw/profile/profile.hpp"

#include <set>

namespace govgw::profile {

std::string_view to_string(LifecycleState s) {
  switch (s) {
    case LifecycleState::kDeposited: return "Deposited";
    case LifecycleState::kServicesDescribed: return "ServicesDescribed";
    case LifecycleState::kPoliciesSchemed: return "PoliciesSchemed";
    case LifecycleState::kBindingsValidated: return "BindingsValidated";
    case LifecycleState::kProfileComplete: return "ProfileComplete";
    case LifecycleState::kInstantiable: return "Instantiable";
    case LifecycleState::kContextBound: return "ContextBound";
    case LifecycleState::kPoliciesRefined: return "PoliciesRefined";
    case LifecycleState::kTransformsRefined: return "TransformsRefined";
    case LifecycleState::kCoordinationBound: return "CoordinationBound";
    case LifecycleState::kEnacted: return "Enacted";
    case LifecycleState::kFailed: return "Failed";
  }
  return "?";
}

std::optional<LifecycleState> state_from_string(std::string_view name) {
  for (auto s : kLifecycleOrder) {
    if (to_string(s) == name) return s;
  }
  if (name == "Failed") return LifecycleState::kFailed;
  return std::nullopt;
}

std::optional<LifecycleState> next_state(LifecycleState s) {
  if (s == LifecycleState::kEnacted || s == LifecycleState::kFailed) return std::nullopt;
  return static_cast<LifecycleState>(static_cast<int>(s) + 1);
}

std::pair<int, int> step_range(LifecycleState s) {
  switch (s) {
    case LifecycleState::kServicesDescribed: return {1, 4};
    case LifecycleState::kPoliciesSchemed: return {5, 8};
    case LifecycleState::kBindingsValidated: return {9, 12};
    case LifecycleState::kProfileComplete: return {13, 15};
    case LifecycleState::kInstantiable: return {16, 20};
    case LifecycleState::kContextBound: return {21, 24};
    case LifecycleState::kPoliciesRefined: return {25, 27};
    case LifecycleState::kTransformsRefined: return {28, 30};
    case LifecycleState::kCoordinationBound: return {31, 35};
    case LifecycleState::kEnacted: return {36, 39};
    default: return {0, 0};
  }
}

void TransformDescriptor::validate() const {
  if (from_grammar.empty() || to_grammar.empty()) {
    throw Error(Errc::kInvalidTransform, "transform grammars must be non-empty");
  }
  if (kind == TransformKind::kIdentity) {
    if (from_grammar != to_grammar) {
      throw Error(Errc::kInvalidTransform, "identity transform requires from_grammar == "
                                           "to_grammar (" + from_grammar + " vs " +
                                               to_grammar + ")");
    }
    if (!rename_map.empty()) {
      throw Error(Errc::kInvalidTransform, "identity transform cannot carry a rename_map");
    }
    return;
  }
  std::set<std::string> targets;
  for (const auto& [from, to] : rename_map) {
    if (!targets.insert(to).second) {
      throw Error(Errc::kInvalidTransform, "rename_map maps two keys onto '" + to + "'");
    }
  }
}

bool is_reserved_attribute(std::string_view key) {
  return key.substr(0, kConfigPrefix.size()) == kConfigPrefix ||
         key.substr(0, kInputPrefix.size()) == kInputPrefix || key == kInvocationPatternKey;
}

std::map<std::string, std::string> Requirement::match_attributes() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : attributes) {
    if (!is_reserved_attribute(k)) out.emplace(k, v);
  }
  return out;
}

namespace {

std::map<std::string, std::string> with_prefix(const std::map<std::string, std::string>& attributes,
                                               std::string_view prefix) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : attributes) {
    if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0) {
      out.emplace(k.substr(prefix.size()), v);
    }
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> Requirement::config_parameters() const {
  return with_prefix(attributes, kConfigPrefix);
}

std::map<std::string, std::string> Requirement::input_overrides() const {
  return with_prefix(attributes, kInputPrefix);
}

std::optional<std::string> Requirement::demanded_pattern() const {
  auto it = attributes.find(std::string(kInvocationPatternKey));
  if (it == attributes.end()) return std::nullopt;
  return it->second;
}

ValidationReport validate_against_taxonomy(const SecurityProfile& profile,
                                           const Taxonomy& taxonomy) {
  ValidationReport report;
  for (std::size_t i = 0; i < profile.requirements.size(); ++i) {
    const auto& req = profile.requirements[i];
    if (!taxonomy.has_category(req.category)) {
      report.add("UnknownCategory", "category '" + req.category + "' is not in the taxonomy", i);
      continue;
    }
    auto owner = taxonomy.category_of(req.mechanism);
    if (!owner) {
      report.add("UnknownMechanism", "mechanism '" + req.mechanism + "' is not in the taxonomy",
                 i);
      continue;
    }
    if (*owner != req.category) {
      report.add("CategoryMismatch", "mechanism '" + req.mechanism + "' belongs to '" + *owner +
                                         "', not '" + req.category + "'",
                 i);
      continue;
    }
    for (const auto& key : taxonomy.required_attributes(req.category, req.mechanism)) {
      if (req.attributes.count(key) == 0) {
        report.add("MissingAttribute",
                   "mechanism '" + req.mechanism + "' requires attribute '" + key + "'", i);
      }
    }
  }
  return report;
}

}  // namespace govgw::profile
