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
#ifndef GOVGW_COMMON_JSON_UTIL_HPP_
#define GOVGW_COMMON_JSON_UTIL_HPP_

#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace govgw::json_util {

using json = nlohmann::json;

// Strict-field readers. All of them throw govgw::Error with
// kMalformedDocument, kUnknownField or kMissingField.
void require_object(const json& j, std::string_view where);
void reject_unknown_fields(const json& j, std::initializer_list<std::string_view> allowed,
                           std::string_view where);
const json& require_field(const json& j, std::string_view key, std::string_view where);
std::string require_string(const json& j, std::string_view key, std::string_view where);
std::string optional_string(const json& j, std::string_view key, std::string_view where,
                            std::string fallback = {});
std::vector<std::string> string_list(const json& j, std::string_view where);
std::map<std::string, std::string> string_map(const json& j, std::string_view where);

json parse_or_throw(std::string_view bytes, std::string_view where);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace govgw::json_util

#endif  // GOVGW_COMMON_JSON_UTIL_HPP_
