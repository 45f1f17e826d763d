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
#ifndef GOVGW_HARNESS_MOCKS_HPP_
#define GOVGW_HARNESS_MOCKS_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "govgw/common/time.hpp"
#include "govgw/gateway/http.hpp"
#include "govgw/harness/fixture.hpp"

namespace govgw::harness {

struct CheckResult {
  bool accepted = false;
  std::string reason;
};

// Accepts iff Authorization is "Basic " + base64(login:password) for an
// entry of the credential table.
CheckResult check_basic(const gateway::Headers& headers,
                        const std::map<std::string, std::string>& credentials);
// Accepts iff the PDP proof header is present and non-empty.
CheckResult check_proof(const gateway::Headers& headers);
// Accepts iff the body starts with a well-formed token for a known login
// whose age at 'now' is within max_age_seconds.
CheckResult check_xml_token(std::string_view body,
                            const std::map<std::string, std::string>& credentials,
                            long max_age_seconds, TimePoint now);
CheckResult check_message(const MockProviderSpec& spec, const gateway::Headers& headers,
                          std::string_view body, TimePoint now);

struct Delivery {
  std::string provider;
  std::uint64_t message_id = 0;  // from X-Govgw-Message-Id, 0 if absent
  bool accepted = false;
  std::string reason;
};

// In-process content providers, one loopback HTTP server each.
class MockProviders {
 public:
  explicit MockProviders(std::vector<MockProviderSpec> specs, Clock clock = system_clock());
  ~MockProviders();

  MockProviders(const MockProviders&) = delete;
  MockProviders& operator=(const MockProviders&) = delete;

  // Ports missing from the map (or 0) are picked by the system.
  void start(const std::string& host, const std::map<std::string, int>& ports = {});
  void stop();

  // Throws kInvalidArgument for an unknown provider.
  std::string url(const std::string& name) const;
  std::vector<Delivery> deliveries() const;

 private:
  std::vector<MockProviderSpec> specs_;
  Clock clock_;
  std::vector<std::unique_ptr<gateway::HttpServer>> servers_;
  std::map<std::string, std::string> urls_;
  mutable std::mutex mu_;
  std::vector<Delivery> deliveries_;
};

}  // namespace govgw::harness

#endif  // GOVGW_HARNESS_MOCKS_HPP_
