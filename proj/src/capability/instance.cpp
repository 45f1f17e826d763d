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
#include "govgw/capability/instance.hpp"

#include "govgw/common/error.hpp"

namespace govgw::capability {

std::string_view to_string(InstanceState s) {
  switch (s) {
    case InstanceState::kConfigured: return "configured";
    case InstanceState::kActive: return "active";
    case InstanceState::kFailed: return "failed";
  }
  return "?";
}

std::string_view to_string(ResultOutcome o) {
  switch (o) {
    case ResultOutcome::kSuccess: return "success";
    case ResultOutcome::kDenied: return "denied";
    case ResultOutcome::kError: return "error";
  }
  return "?";
}

CapabilityResult CapabilityResult::success(std::string action, Params metadata,
                                           std::string detail) {
  return {std::move(action), ResultOutcome::kSuccess, std::move(metadata), std::move(detail), {}};
}

CapabilityResult CapabilityResult::denied(std::string action, std::string code,
                                          std::string detail) {
  return {std::move(action), ResultOutcome::kDenied, {}, std::move(detail), std::move(code)};
}

CapabilityResult CapabilityResult::error(std::string action, std::string code,
                                         std::string detail) {
  return {std::move(action), ResultOutcome::kError, {}, std::move(detail), std::move(code)};
}

nlohmann::json result_json(const CapabilityResult& r) {
  nlohmann::json j{{"action", r.action},
                   {"outcome", to_string(r.outcome)},
                   {"emitted_metadata", r.emitted_metadata},
                   {"detail", r.detail}};
  if (!r.code.empty()) j["code"] = r.code;
  return j;
}

CapabilityInstance::CapabilityInstance(std::string instance_id,
                                       registry::CapabilityDescriptor descriptor)
    : instance_id_(std::move(instance_id)), descriptor_(std::move(descriptor)) {}

void CapabilityInstance::check_policies(const std::vector<policy::ConcretePolicy>& policies) const {
  for (const auto& p : policies) {
    if (!descriptor_.supported_grammars.count(p.grammar)) {
      throw Error(Errc::kPolicyGrammarUnsupported,
                  descriptor_.capability_id + " does not accept grammar " + p.grammar);
    }
  }
}

void CapabilityInstance::allow_keys(const Params& config, const std::set<std::string>& allowed,
                                    const std::set<std::string>& prefixes) {
  for (const auto& [key, value] : config) {
    if (allowed.count(key)) continue;
    bool prefixed = false;
    for (const auto& p : prefixes) prefixed |= key.size() > p.size() && key.compare(0, p.size(), p) == 0;
    if (!prefixed) throw Error(Errc::kInvalidConfigKey, key);
  }
}

void CapabilityInstance::configure(const Params& config,
                                   const std::vector<policy::ConcretePolicy>& policies) {
  std::lock_guard lock(control_mu_);
  if (state_ == InstanceState::kFailed) {
    throw Error(Errc::kInstanceNotActive, instance_id_ + " has failed");
  }
  check_config(config);
  check_policies(policies);
  auto next = std::make_shared<InstanceConfig>();
  next->version = current_ ? current_->version + 1 : 1;
  next->config = config;
  next->policies = policies;
  if (current_) history_.push_back(current_);
  std::atomic_store(&current_, std::shared_ptr<const InstanceConfig>(std::move(next)));
  state_ = InstanceState::kActive;
}

void CapabilityInstance::rollback() {
  std::lock_guard lock(control_mu_);
  if (history_.empty()) throw Error(Errc::kInvalidArgument, instance_id_ + " has no prior version");
  std::atomic_store(&current_, history_.back());
  history_.pop_back();
}

void CapabilityInstance::fail() {
  std::lock_guard lock(control_mu_);
  state_ = InstanceState::kFailed;
}

std::shared_ptr<const InstanceConfig> CapabilityInstance::current() const {
  return std::atomic_load(&current_);
}

std::vector<policy::ConcretePolicy> CapabilityInstance::policy_store() const {
  auto c = current();
  return c ? c->policies : std::vector<policy::ConcretePolicy>{};
}

CapabilityResult CapabilityInstance::invoke(const std::string& operation,
                                            const Params& inputs) const {
  if (state_ != InstanceState::kActive) {
    throw Error(Errc::kInstanceNotActive,
                instance_id_ + " is " + std::string(to_string(state_.load())));
  }
  if (!operations().count(operation)) {
    throw Error(Errc::kInvalidArgument, instance_id_ + " has no operation " + operation);
  }
  auto config = current();
  return perform(operation, inputs, *config);
}

}  // namespace govgw::capability
