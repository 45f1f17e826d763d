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
#include "govgw/policy/dependencies.hpp"

namespace govgw::policy {

std::optional<std::vector<profile::TransformDescriptor>> find_transform_chain(
    const std::string& from, const std::set<std::string>& accepted,
    const std::vector<profile::TransformDescriptor>& transforms) {
  if (accepted.count(from)) return std::vector<profile::TransformDescriptor>{};
  for (const auto& first : transforms) {
    if (first.from_grammar == from && accepted.count(first.to_grammar)) {
      return std::vector<profile::TransformDescriptor>{first};
    }
  }
  for (const auto& first : transforms) {
    if (first.from_grammar != from) continue;
    for (const auto& second : transforms) {
      if (second.from_grammar == first.to_grammar && accepted.count(second.to_grammar)) {
        return std::vector<profile::TransformDescriptor>{first, second};
      }
    }
  }
  return std::nullopt;
}

ValidationReport validate_policy_dependencies(
    const std::vector<PolicyAssignment>& assignments,
    const std::vector<profile::TransformDescriptor>& transforms,
    const GrammarTable& capability_grammars) {
  static const std::set<std::string> kNone;
  ValidationReport report;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const auto& a = assignments[i];
    auto it = capability_grammars.find(a.capability_id);
    const auto& accepted = it == capability_grammars.end() ? kNone : it->second;
    if (!find_transform_chain(a.policy.grammar, accepted, transforms)) {
      report.add("GrammarMismatch",
                 "policy grammar " + a.policy.grammar + " not accepted by " + a.capability_id,
                 i);
    }
  }
  return report;
}

}  // namespace govgw::policy
