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
#ifndef GOVGW_PROFILE_DOCUMENT_HPP_
#define GOVGW_PROFILE_DOCUMENT_HPP_

#include <string>
#include <string_view>

#include <json.hpp>

#include "govgw/profile/profile.hpp"

namespace govgw::profile {

// Parses a deposited profile document (strict fields). The result is in
// state Deposited; no snapshot is taken here.
//
// Throws kMalformedDocument, kUnknownField or kMissingField.
SecurityProfile parse_profile(std::string_view document);

// The deposit form, i.e. what parse_profile accepts.
nlohmann::json deposit_json(const SecurityProfile& profile);

// Full document: deposit form plus lifecycle state, failure and stage
// artifacts. Excludes the version counter.
nlohmann::json document_json(const SecurityProfile& profile);
SecurityProfile profile_from_document(const nlohmann::json& document);

// Sorted-key compact serialisation of document_json; two profiles with equal
// documents produce identical bytes.
std::string canonical_bytes(const SecurityProfile& profile);

nlohmann::json requirement_json(const Requirement& req);
Requirement requirement_from_json(const nlohmann::json& j);
nlohmann::json transform_json(const TransformDescriptor& t);
TransformDescriptor transform_from_json(const nlohmann::json& j);

}  // namespace govgw::profile

#endif  // GOVGW_PROFILE_DOCUMENT_HPP_
