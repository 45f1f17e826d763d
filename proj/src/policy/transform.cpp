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
#include "govgw/policy/transform.hpp"

#include "govgw/common/error.hpp"

namespace govgw::policy {

Document apply_transform(const profile::TransformDescriptor& descriptor,
                         const Document& document) {
  descriptor.validate();
  if (descriptor.kind == profile::TransformKind::kIdentity) return document;
  Document out;
  for (const auto& [key, value] : document) {
    auto it = descriptor.rename_map.find(key);
    const std::string& name = it == descriptor.rename_map.end() ? key : it->second;
    if (!out.emplace(name, value).second) {
      throw Error(Errc::kRenameCollision, "key '" + name + "' produced twice");
    }
  }
  return out;
}

Document apply_chain(const std::vector<profile::TransformDescriptor>& chain,
                     const Document& document) {
  Document out = document;
  for (const auto& step : chain) out = apply_transform(step, out);
  return out;
}

ConcretePolicy retarget(const ConcretePolicy& policy,
                        const std::vector<profile::TransformDescriptor>& chain) {
  ConcretePolicy out = policy;
  for (const auto& step : chain) {
    if (step.from_grammar != out.grammar) {
      throw Error(Errc::kGrammarMismatch,
                  "transform expects " + step.from_grammar + ", policy is " + out.grammar);
    }
    out.grammar = step.to_grammar;
  }
  return out;
}

}  // namespace govgw::policy
