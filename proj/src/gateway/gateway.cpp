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
#include "govgw/gateway/gateway.hpp"

#include <atomic>

#include "govgw/common/error.hpp"

namespace govgw::gateway {

using capability::CapabilityResult;
using capability::ResultOutcome;

std::string_view to_string(EndpointMode m) {
  switch (m) {
    case EndpointMode::kServing: return "serving";
    case EndpointMode::kBuffering: return "buffering";
    case EndpointMode::kUnavailable: return "unavailable";
  }
  return "?";
}

struct Gateway::Pending {
  GatewayMessage message;
  std::shared_ptr<std::promise<Response>> promise;
};

struct Gateway::Endpoint {
  std::string route;
  std::string profile_id;
  std::shared_ptr<const EnactedPipeline> pipeline;  // atomic access only
  std::atomic<std::uint64_t> next_id{1};

  std::mutex mu;
  EndpointMode mode = EndpointMode::kServing;
  std::map<std::uint64_t, Pending> buffer;
  ReplayReport episode;

  std::shared_ptr<const EnactedPipeline> current() const { return std::atomic_load(&pipeline); }
};

namespace {

Response gateway_response(int status, std::string error, std::string body,
                          const GatewayMessage& m, std::uint64_t version) {
  return {status, std::move(body), std::move(error), m.message_id, version};
}

void merge(const capability::Params& metadata, GatewayMessage& m) {
  for (const auto& [key, value] : metadata) {
    if (key.rfind("header:", 0) == 0) {
      m.headers[key.substr(7)] = value;
    } else if (key == "body:prepend") {
      m.body = value + m.body;
    }
  }
}

}  // namespace

Gateway::Gateway(std::shared_ptr<capability::AuditStore> audits,
                 std::shared_ptr<Forwarder> forwarder, std::size_t buffer_bound)
    : audits_(std::move(audits)), forwarder_(std::move(forwarder)), buffer_bound_(buffer_bound) {}

Gateway::~Gateway() {
  std::lock_guard lock(mu_);
  for (auto& [profile, ep] : by_profile_) {
    std::lock_guard ep_lock(ep->mu);
    for (auto& [id, pending] : ep->buffer) {
      pending.promise->set_value(gateway_response(503, "EndpointUnavailable", "gateway stopped",
                                                  pending.message, 0));
    }
    ep->buffer.clear();
  }
}

void Gateway::expose(std::shared_ptr<const EnactedPipeline> pipeline) {
  std::lock_guard lock(mu_);
  const std::string& profile = pipeline->profile_id();
  auto owner = by_route_.find(pipeline->route());
  if (owner != by_route_.end() && owner->second->profile_id != profile) {
    throw Error(Errc::kRouteConflict,
                pipeline->route() + " is served for " + owner->second->profile_id);
  }
  auto& ep = by_profile_[profile];
  if (!ep) {
    ep = std::make_shared<Endpoint>();
    ep->profile_id = profile;
  } else if (ep->route != pipeline->route()) {
    by_route_.erase(ep->route);
  }
  ep->route = pipeline->route();
  by_route_[ep->route] = ep;
  std::atomic_store(&ep->pipeline, pipeline);
  auto& v = versions_[profile];
  v = std::max(v, pipeline->version());
}

void Gateway::withdraw(const std::string& profile_id) {
  std::shared_ptr<Endpoint> ep;
  {
    std::lock_guard lock(mu_);
    auto it = by_profile_.find(profile_id);
    if (it == by_profile_.end()) return;
    ep = it->second;
    by_route_.erase(ep->route);
    by_profile_.erase(it);
  }
  std::lock_guard ep_lock(ep->mu);
  for (auto& [id, pending] : ep->buffer) {
    pending.promise->set_value(
        gateway_response(503, "EndpointUnavailable", "endpoint withdrawn", pending.message, 0));
  }
  ep->buffer.clear();
}

std::uint64_t Gateway::next_version(const std::string& profile_id) const {
  std::lock_guard lock(mu_);
  auto it = versions_.find(profile_id);
  return it == versions_.end() ? 1 : it->second + 1;
}

std::shared_ptr<Gateway::Endpoint> Gateway::endpoint_for_route(const std::string& route) const {
  std::lock_guard lock(mu_);
  auto it = by_route_.find(route);
  return it == by_route_.end() ? nullptr : it->second;
}

std::shared_ptr<Gateway::Endpoint> Gateway::endpoint_for_profile(
    const std::string& profile_id) const {
  std::lock_guard lock(mu_);
  auto it = by_profile_.find(profile_id);
  return it == by_profile_.end() ? nullptr : it->second;
}

bool Gateway::enqueue_locked(Endpoint& ep, GatewayMessage m,
                             std::shared_ptr<std::promise<Response>> pr) {
  if (ep.buffer.size() >= buffer_bound_) {
    ++ep.episode.rejected;
    return false;
  }
  const std::uint64_t id = m.message_id;
  ep.buffer.emplace(id, Pending{std::move(m), std::move(pr)});
  ++ep.episode.buffered;
  return true;
}

std::future<Response> Gateway::submit(const std::string& route, GatewayMessage message) {
  auto promise = std::make_shared<std::promise<Response>>();
  auto future = promise->get_future();
  auto ep = endpoint_for_route(route);
  if (!ep) {
    promise->set_value(gateway_response(404, "UnknownRoute", "no endpoint at " + route, message, 0));
    return future;
  }
  message.message_id = ep->next_id++;
  {
    std::lock_guard lock(ep->mu);
    if (ep->mode == EndpointMode::kUnavailable) {
      promise->set_value(gateway_response(503, "EndpointUnavailable", "endpoint unavailable",
                                          message, ep->current()->version()));
      return future;
    }
    if (ep->mode == EndpointMode::kBuffering) {
      GatewayMessage copy = message;
      if (!enqueue_locked(*ep, std::move(message), promise)) {
        promise->set_value(gateway_response(503, "BufferOverflow", "buffer full", copy,
                                            ep->current()->version()));
      }
      return future;
    }
  }
  auto pipeline = ep->current();
  if (auto r = run(*ep, *pipeline, message, promise)) promise->set_value(std::move(*r));
  return future;
}

Response Gateway::process(const std::string& route, GatewayMessage message) {
  return submit(route, std::move(message)).get();
}

std::optional<Response> Gateway::run(Endpoint& ep, const EnactedPipeline& p, GatewayMessage& m,
                                     std::shared_ptr<std::promise<Response>>& promise) {
  auto trail = audits_->trail(p.profile_id());
  const capability::HashAlg alg = p.hash_alg();
  const std::string tag = "msg=" + std::to_string(m.message_id) + " v=" + std::to_string(p.version());
  auto record = [&](const std::string& instance, const std::string& action,
                    const std::string& outcome, const std::string& detail) {
    trail->append(instance, action, outcome, detail.empty() ? tag : tag + " " + detail, alg);
  };

  try {
    for (const auto& step : p.steps()) {
      const auto& inst = *step.instance;
      const std::string action = inst.descriptor().mechanism + "." + step.operation;
      const bool audit_step = inst.descriptor().mechanism == "audit-log";
      capability::Params inputs;
      if (audit_step) {
        inputs = {{"action", action},
                  {"instance_id", inst.instance_id()},
                  {"outcome", "success"},
                  {"detail", tag + " route=" + p.route()}};
      } else {
        for (const auto& [slot, source] : step.input_bindings) {
          if (auto v = resolve_source(source, m)) inputs[slot] = *v;
        }
      }
      CapabilityResult result;
      try {
        result = inst.invoke(step.operation, inputs);
      } catch (const Error& e) {
        if (e.code() != Errc::kInstanceNotActive) throw;
        // The capability went away under this message: park it for replay
        // on the recovered pipeline instead of failing it.
        record(inst.instance_id(), action, "error", "InstanceNotActive");
        record("gateway", "buffer", "deferred", "");
        std::unique_lock lock(ep.mu);
        auto now = ep.current();
        if (ep.mode == EndpointMode::kServing && now->version() != p.version()) {
          lock.unlock();
          return run(ep, *now, m, promise);
        }
        if (ep.mode == EndpointMode::kServing) {
          ep.mode = EndpointMode::kBuffering;
          ep.episode = {};
        }
        GatewayMessage copy = m;
        if (!enqueue_locked(ep, std::move(m), promise)) {
          return gateway_response(503, "BufferOverflow", "buffer full", copy, p.version());
        }
        return std::nullopt;
      }
      if (!(audit_step && result.ok())) {
        std::string detail = result.detail;
        if (!result.code.empty()) detail = result.code + ": " + detail;
        record(inst.instance_id(), result.action.empty() ? action : result.action,
               std::string(capability::to_string(result.outcome)), detail);
      }
      if (result.outcome == ResultOutcome::kSuccess) {
        merge(result.emitted_metadata, m);
      } else if (result.outcome == ResultOutcome::kDenied) {
        if (step.on_deny == OnDeny::kReject) {
          record("gateway", "reject", "denied", "status=403");
          return gateway_response(403, result.code.empty() ? "Denied" : result.code,
                                  result.detail, m, p.version());
        }
        m.headers["X-Govgw-Annotation"] += (m.headers["X-Govgw-Annotation"].empty() ? "" : "; ") +
                                           action + " denied";
      } else {
        record("gateway", "reject", "error", "status=502");
        return gateway_response(502, result.code.empty() ? "CapabilityError" : result.code,
                                result.detail, m, p.version());
      }
    }
  } catch (const Error& e) {
    // Audit storage itself failed: fail closed without forwarding.
    return gateway_response(502, std::string(to_string(e.code())), e.detail(), m, p.version());
  }

  ProviderResponse provider;
  try {
    provider = forwarder_->forward(p.forward_target(), m);
  } catch (const std::exception& e) {
    try {
      record("gateway", "forward", "error", e.what());
    } catch (const Error&) {
    }
    return gateway_response(502, "ForwardFailure", e.what(), m, p.version());
  }
  try {
    record("gateway", "forward", "success", "status=" + std::to_string(provider.status));
  } catch (const Error& e) {
    return gateway_response(502, std::string(to_string(e.code())), e.detail(), m, p.version());
  }
  return Response{provider.status, provider.body, "", m.message_id, p.version()};
}

void Gateway::enter_buffering(const std::string& profile_id) {
  auto ep = endpoint_for_profile(profile_id);
  if (!ep) throw Error(Errc::kUnknownProfile, profile_id);
  std::lock_guard lock(ep->mu);
  if (ep->mode == EndpointMode::kServing) ep->episode = {};
  ep->mode = EndpointMode::kBuffering;
}

void Gateway::mark_unavailable(const std::string& profile_id) {
  auto ep = endpoint_for_profile(profile_id);
  if (!ep) throw Error(Errc::kUnknownProfile, profile_id);
  std::lock_guard lock(ep->mu);
  ep->mode = EndpointMode::kUnavailable;
}

ReplayReport Gateway::replay(const std::string& profile_id,
                             std::shared_ptr<const EnactedPipeline> next) {
  auto ep = endpoint_for_profile(profile_id);
  if (!ep) throw Error(Errc::kUnknownProfile, profile_id);
  if (next) {
    if (next->profile_id() != profile_id) {
      throw Error(Errc::kInvalidArgument, "pipeline belongs to " + next->profile_id());
    }
    expose(next);
  }
  {
    std::lock_guard lock(ep->mu);
    if (ep->mode == EndpointMode::kUnavailable) ep->mode = EndpointMode::kBuffering;
  }
  std::size_t replayed = 0;
  while (true) {
    Pending item;
    {
      std::lock_guard lock(ep->mu);
      if (ep->buffer.empty()) {
        ReplayReport report = ep->episode;
        report.replayed = replayed;
        ep->episode = {};
        ep->mode = EndpointMode::kServing;
        return report;
      }
      auto first = ep->buffer.begin();
      item = std::move(first->second);
      ep->buffer.erase(first);
    }
    auto pipeline = ep->current();
    auto r = run(*ep, *pipeline, item.message, item.promise);
    if (!r) {
      // Parked again: the new pipeline is failing too. Stay buffering.
      std::lock_guard lock(ep->mu);
      ReplayReport report = ep->episode;
      report.replayed = replayed;
      return report;
    }
    item.promise->set_value(std::move(*r));
    ++replayed;
  }
}

EndpointStatus Gateway::status(const std::string& profile_id) const {
  auto ep = endpoint_for_profile(profile_id);
  if (!ep) throw Error(Errc::kUnknownProfile, profile_id);
  std::lock_guard lock(ep->mu);
  return {ep->route, ep->mode, ep->current()->version(), ep->buffer.size()};
}

std::shared_ptr<const EnactedPipeline> Gateway::pipeline(const std::string& profile_id) const {
  auto ep = endpoint_for_profile(profile_id);
  return ep ? ep->current() : nullptr;
}

bool Gateway::has_endpoint(const std::string& profile_id) const {
  return endpoint_for_profile(profile_id) != nullptr;
}

std::optional<std::string> Gateway::route_owner(const std::string& route) const {
  auto ep = endpoint_for_route(route);
  if (!ep) return std::nullopt;
  return ep->profile_id;
}

std::vector<capability::AuditRecord> Gateway::query_audit(const std::string& profile_id,
                                                          std::uint64_t from,
                                                          std::uint64_t to) const {
  auto trail = audits_->find(profile_id);
  if (!trail) {
    if (!has_endpoint(profile_id)) throw Error(Errc::kUnknownProfile, profile_id);
    return {};
  }
  return trail->records(from, to);
}

}  // namespace govgw::gateway
