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
#ifndef GOVGW_GATEWAY_MESSAGE_HPP_
#define GOVGW_GATEWAY_MESSAGE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace govgw::gateway {

struct HeaderLess {
  bool operator()(const std::string& a, const std::string& b) const;
};

// Header names compare case-insensitively.
using Headers = std::map<std::string, std::string, HeaderLess>;

struct MessageContext {
  std::string subject;
  std::string action;
  std::string resource;
  std::string client_address;
  std::string timestamp;  // ISO-8601 UTC
};

struct GatewayMessage {
  std::uint64_t message_id = 0;  // assigned at ingress
  Headers headers;
  std::string body;
  MessageContext context;
};

// Resolves one binding source against a message: context.<field>,
// header.<Name> or literal:<text>; comma-separated alternatives are tried in
// order and the first non-empty value wins.
std::optional<std::string> resolve_source(const std::string& source, const GatewayMessage& m);

struct Response {
  int status = 0;
  std::string body;
  std::string error;  // error code for gateway-made responses
  std::uint64_t message_id = 0;
  std::uint64_t pipeline_version = 0;
};

}  // namespace govgw::gateway

#endif  // GOVGW_GATEWAY_MESSAGE_HPP_
