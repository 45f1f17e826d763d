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
#include "govgw/harness/mocks.hpp"

#include "govgw/capability/codec.hpp"
#include "govgw/capability/services.hpp"
#include "govgw/capability/xml_token.hpp"
#include "govgw/common/error.hpp"

namespace govgw::harness {

CheckResult check_basic(const gateway::Headers& headers,
                        const std::map<std::string, std::string>& credentials) {
  auto it = headers.find("Authorization");
  if (it == headers.end()) return {false, "no Authorization header"};
  for (const auto& [login, password] : credentials) {
    if (it->second == "Basic " + capability::base64_encode(login + ":" + password)) {
      return {true, "basic credentials of " + login};
    }
  }
  return {false, "unknown basic credentials"};
}

CheckResult check_proof(const gateway::Headers& headers) {
  auto it = headers.find(std::string(capability::kProofHeader));
  if (it == headers.end() || it->second.empty()) return {false, "no proof id"};
  return {true, it->second};
}

CheckResult check_xml_token(std::string_view body,
                            const std::map<std::string, std::string>& credentials,
                            long max_age_seconds, TimePoint now) {
  std::size_t n = capability::token_prefix_length(body);
  if (n == 0) return {false, "no token at the start of the body"};
  capability::XmlToken token;
  TimePoint issued;
  try {
    token = capability::parse_token(body.substr(0, n));
    issued = parse_iso8601(token.issued);
  } catch (const Error& e) {
    return {false, e.detail()};
  }
  auto known = credentials.find(token.login);
  if (known == credentials.end() || known->second != token.password) {
    return {false, "unknown credentials for " + token.login};
  }
  if (issued > now || now - issued > std::chrono::seconds(max_age_seconds)) {
    return {false, "stale token issued " + token.issued};
  }
  return {true, "token of " + token.login};
}

CheckResult check_message(const MockProviderSpec& spec, const gateway::Headers& headers,
                          std::string_view body, TimePoint now) {
  switch (spec.check) {
    case ProviderCheck::kBasic: return check_basic(headers, spec.credentials);
    case ProviderCheck::kProof: return check_proof(headers);
    case ProviderCheck::kXmlToken:
      return check_xml_token(body, spec.credentials, spec.max_age_seconds, now);
  }
  return {false, "unknown check"};
}

MockProviders::MockProviders(std::vector<MockProviderSpec> specs, Clock clock)
    : specs_(std::move(specs)), clock_(std::move(clock)) {}

MockProviders::~MockProviders() { stop(); }

void MockProviders::start(const std::string& host, const std::map<std::string, int>& ports) {
  for (const auto& spec : specs_) {
    auto server = std::make_unique<gateway::HttpServer>();
    server->post(spec.route, [this, spec](const gateway::HttpRequest& req) {
      CheckResult r = check_message(spec, req.headers, req.body, clock_());
      Delivery d{spec.name, 0, r.accepted, r.reason};
      if (auto it = req.headers.find("X-Govgw-Message-Id"); it != req.headers.end()) {
        try {
          d.message_id = std::stoull(it->second);
        } catch (const std::exception&) {
        }
      }
      {
        std::lock_guard lock(mu_);
        deliveries_.push_back(d);
      }
      gateway::HttpReply reply;
      reply.status = r.accepted ? 200 : (spec.check == ProviderCheck::kBasic ? 401 : 403);
      reply.body = nlohmann::json{{"provider", spec.name}, {"accepted", r.accepted},
                                  {"reason", r.reason}}
                       .dump();
      return reply;
    });
    auto it = ports.find(spec.name);
    int port = server->start(host, it == ports.end() ? 0 : it->second);
    urls_[spec.name] = "http://" + host + ":" + std::to_string(port) + spec.route;
    servers_.push_back(std::move(server));
  }
}

void MockProviders::stop() {
  for (auto& s : servers_) s->stop();
  servers_.clear();
}

std::string MockProviders::url(const std::string& name) const {
  auto it = urls_.find(name);
  if (it == urls_.end()) throw Error(Errc::kInvalidArgument, "no mock provider '" + name + "'");
  return it->second;
}

std::vector<Delivery> MockProviders::deliveries() const {
  std::lock_guard lock(mu_);
  return deliveries_;
}

}  // namespace govgw::harness
