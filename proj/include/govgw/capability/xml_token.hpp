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
#ifndef GOVGW_CAPABILITY_XML_TOKEN_HPP_
#define GOVGW_CAPABILITY_XML_TOKEN_HPP_

#include <string>
#include <string_view>

namespace govgw::capability {

inline constexpr std::string_view kTokenNamespace = "urn:cp3:token:v1";

struct XmlToken {
  std::string login;
  std::string password;
  std::string issued;  // ISO-8601 UTC

  bool operator==(const XmlToken&) const = default;
};

// <token xmlns="urn:cp3:token:v1"><login>..</login><password>..</password>
// <issued>..</issued></token>, no whitespace, text escaped as XML.
std::string render_token(const XmlToken& token);

// Strict reader for exactly the rendered form. Throws kSchemaViolation.
XmlToken parse_token(std::string_view text);

// Length of the token document at the start of text, or 0 if text does not
// start with a complete token element.
std::size_t token_prefix_length(std::string_view text);

}  // namespace govgw::capability

#endif  // GOVGW_CAPABILITY_XML_TOKEN_HPP_
