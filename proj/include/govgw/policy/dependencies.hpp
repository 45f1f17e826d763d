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
#ifndef GOVGW_POLICY_DEPENDENCIES_HPP_
#define GOVGW_POLICY_DEPENDENCIES_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "govgw/common/error.hpp"
#include "govgw/policy/template.hpp"
#include "govgw/profile/profile.hpp"

namespace govgw::policy {

inline constexpr std::size_t kMaxTransformChain = 2;

struct PolicyAssignment {
  ConcretePolicy policy;
  std::string capability_id;
};

using GrammarTable = std::map<std::string, std::set<std::string>>;

// Shortest chain of at most kMaxTransformChain declared transforms taking
// from into one of accepted; an empty chain when from is accepted already.
// Ties go to the earliest declared transforms.
std::optional<std::vector<profile::TransformDescriptor>> find_transform_chain(
    const std::string& from, const std::set<std::string>& accepted,
    const std::vector<profile::TransformDescriptor>& transforms);

// One GrammarMismatch per assignment whose capability cannot consume the
// policy grammar directly or through a chain.
ValidationReport validate_policy_dependencies(
    const std::vector<PolicyAssignment>& assignments,
    const std::vector<profile::TransformDescriptor>& transforms,
    const GrammarTable& capability_grammars);

}  // namespace govgw::policy

#endif  // GOVGW_POLICY_DEPENDENCIES_HPP_
