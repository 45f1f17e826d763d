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
#include "govgw/gateway/message.hpp"

#include <algorithm>
#include <cctype>

namespace govgw::gateway {

bool HeaderLess::operator()(const std::string& a, const std::string& b) const {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) < std::tolower(static_cast<unsigned char>(y));
  });
}

namespace {

std::optional<std::string> resolve_one(const std::string& source, const GatewayMessage& m) {
  if (source.rfind("literal:", 0) == 0) return source.substr(8);
  if (source.rfind("header.", 0) == 0) {
    auto it = m.headers.find(source.substr(7));
    if (it == m.headers.end()) return std::nullopt;
    return it->second;
  }
  if (source.rfind("context.", 0) == 0) {
    const std::string field = source.substr(8);
    if (field == "subject") return m.context.subject;
    if (field == "action") return m.context.action;
    if (field == "resource") return m.context.resource;
    if (field == "client_address") return m.context.client_address;
    if (field == "timestamp") return m.context.timestamp;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> resolve_source(const std::string& source, const GatewayMessage& m) {
  std::size_t pos = 0;
  while (pos <= source.size()) {
    std::size_t comma = source.find(',', pos);
    if (comma == std::string::npos || source.compare(pos, 8, "literal:") == 0) {
      comma = source.size();
    }
    auto value = resolve_one(source.substr(pos, comma - pos), m);
    if (value && !value->empty()) return value;
    pos = comma + 1;
  }
  return std::nullopt;
}

}  // namespace govgw::gateway
