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
#ifndef GOVGW_GATEWAY_FORWARDER_HPP_
#define GOVGW_GATEWAY_FORWARDER_HPP_

#include <functional>
#include <string>

#include "govgw/gateway/message.hpp"

namespace govgw::gateway {

struct ProviderResponse {
  int status = 0;
  std::string body;
};

// Delivers a secured message to the content provider. Throws on transport
// failure.
class Forwarder {
 public:
  virtual ~Forwarder() = default;
  virtual ProviderResponse forward(const std::string& target, const GatewayMessage& message) = 0;
};

// target: http://host:port/path
class HttpForwarder : public Forwarder {
 public:
  ProviderResponse forward(const std::string& target, const GatewayMessage& message) override;
};

class FunctionForwarder : public Forwarder {
 public:
  using Fn = std::function<ProviderResponse(const std::string&, const GatewayMessage&)>;
  explicit FunctionForwarder(Fn fn) : fn_(std::move(fn)) {}
  ProviderResponse forward(const std::string& target, const GatewayMessage& message) override {
    return fn_(target, message);
  }

 private:
  Fn fn_;
};

}  // namespace govgw::gateway

#endif  // GOVGW_GATEWAY_FORWARDER_HPP_
