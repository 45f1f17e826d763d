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
#ifndef GOVGW_POLICY_TRANSFORM_HPP_
#define GOVGW_POLICY_TRANSFORM_HPP_

#include <map>
#include <string>
#include <vector>

#include "govgw/policy/template.hpp"
#include "govgw/profile/profile.hpp"

namespace govgw::policy {

using Document = std::map<std::string, std::string>;

// Identity returns the document unchanged. Field-rename renames keys in
// rename_map and keeps the rest; throws kRenameCollision when two keys land
// on the same name.
Document apply_transform(const profile::TransformDescriptor& descriptor, const Document& document);

// Applies each step in order.
Document apply_chain(const std::vector<profile::TransformDescriptor>& chain,
                     const Document& document);

// Re-labels a policy with the grammar at the end of the chain. The body is
// carried over as is.
ConcretePolicy retarget(const ConcretePolicy& policy,
                        const std::vector<profile::TransformDescriptor>& chain);

}  // namespace govgw::policy

#endif  // GOVGW_POLICY_TRANSFORM_HPP_
