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
#ifndef GOVGW_GATEWAY_GATEWAY_HPP_
#define GOVGW_GATEWAY_GATEWAY_HPP_

#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "govgw/capability/audit.hpp"
#include "govgw/gateway/forwarder.hpp"
#include "govgw/gateway/message.hpp"
#include "govgw/gateway/pipeline.hpp"

namespace govgw::gateway {

inline constexpr std::size_t kDefaultBufferBound = 1024;

enum class EndpointMode { kServing, kBuffering, kUnavailable };
std::string_view to_string(EndpointMode m);

struct ReplayReport {
  std::size_t buffered = 0;
  std::size_t replayed = 0;
  std::size_t rejected = 0;

  bool operator==(const ReplayReport&) const = default;
};

struct EndpointStatus {
  std::string route;
  EndpointMode mode = EndpointMode::kServing;
  std::uint64_t version = 0;
  std::size_t queued = 0;
};

// The data pane: one endpoint per enacted profile. Every message runs
// through exactly one pipeline version; every executed step and the final
// disposition (forward or reject) produce one audit record each.
class Gateway {
 public:
  Gateway(std::shared_ptr<capability::AuditStore> audits, std::shared_ptr<Forwarder> forwarder,
          std::size_t buffer_bound = kDefaultBufferBound);
  ~Gateway();

  // Serves the pipeline at its route, atomically replacing the profile's
  // current pipeline. Throws kRouteConflict.
  void expose(std::shared_ptr<const EnactedPipeline> pipeline);
  void withdraw(const std::string& profile_id);
  // Version the next pipeline of the profile should carry.
  std::uint64_t next_version(const std::string& profile_id) const;

  // Ingress. The future is ready on return unless the message was buffered.
  // Unknown routes answer 404.
  std::future<Response> submit(const std::string& route, GatewayMessage message);
  Response process(const std::string& route, GatewayMessage message);

  void enter_buffering(const std::string& profile_id);
  // Swaps in the new pipeline, then drains the buffer in message id order
  // before resuming live traffic. Arrivals during the drain queue behind.
  ReplayReport replay(const std::string& profile_id, std::shared_ptr<const EnactedPipeline> next);
  // Endpoint answers 503; queued messages are kept for a later replay.
  void mark_unavailable(const std::string& profile_id);

  // Throws kUnknownProfile.
  EndpointStatus status(const std::string& profile_id) const;
  std::shared_ptr<const EnactedPipeline> pipeline(const std::string& profile_id) const;
  bool has_endpoint(const std::string& profile_id) const;
  std::optional<std::string> route_owner(const std::string& route) const;

  // Throws kUnknownProfile when the profile has neither an endpoint nor a
  // trail.
  std::vector<capability::AuditRecord> query_audit(const std::string& profile_id,
                                                   std::uint64_t from = 1,
                                                   std::uint64_t to = UINT64_MAX) const;

  std::shared_ptr<capability::AuditStore> audits() const { return audits_; }

 private:
  struct Endpoint;
  struct Pending;

  std::shared_ptr<Endpoint> endpoint_for_route(const std::string& route) const;
  std::shared_ptr<Endpoint> endpoint_for_profile(const std::string& profile_id) const;
  // Runs one attempt; returns nullopt when the message went to the buffer.
  std::optional<Response> run(Endpoint& ep, const EnactedPipeline& p, GatewayMessage& m,
                              std::shared_ptr<std::promise<Response>>& promise);
  bool enqueue_locked(Endpoint& ep, GatewayMessage m, std::shared_ptr<std::promise<Response>> pr);

  std::shared_ptr<capability::AuditStore> audits_;
  std::shared_ptr<Forwarder> forwarder_;
  const std::size_t buffer_bound_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Endpoint>> by_route_;
  std::map<std::string, std::shared_ptr<Endpoint>> by_profile_;
  std::map<std::string, std::uint64_t> versions_;
};

}  // namespace govgw::gateway

#endif  // GOVGW_GATEWAY_GATEWAY_HPP_
