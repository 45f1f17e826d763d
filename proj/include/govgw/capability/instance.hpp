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
#ifndef GOVGW_CAPABILITY_INSTANCE_HPP_
#define GOVGW_CAPABILITY_INSTANCE_HPP_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "govgw/policy/template.hpp"
#include "govgw/registry/registry.hpp"

namespace govgw::capability {

enum class InstanceState { kConfigured, kActive, kFailed };
std::string_view to_string(InstanceState s);

enum class ResultOutcome { kSuccess, kDenied, kError };
std::string_view to_string(ResultOutcome o);

using Params = std::map<std::string, std::string>;

// Emitted metadata keys understood by the gateway:
//   header:<Name>  set a message header
//   body:prepend   prepend to the message body
struct CapabilityResult {
  std::string action;
  ResultOutcome outcome = ResultOutcome::kSuccess;
  Params emitted_metadata;
  std::string detail;
  std::string code;  // error code name for denied/error results, if any

  bool ok() const { return outcome == ResultOutcome::kSuccess; }
  static CapabilityResult success(std::string action, Params metadata = {},
                                  std::string detail = {});
  static CapabilityResult denied(std::string action, std::string code, std::string detail);
  static CapabilityResult error(std::string action, std::string code, std::string detail);
};

nlohmann::json result_json(const CapabilityResult& result);

// One configuration version of an instance.
struct InstanceConfig {
  std::uint64_t version = 0;
  Params config;
  std::vector<policy::ConcretePolicy> policies;
};

// Base of every capability service implementation. The control pane
// (configure / rollback / fail) is serialised; the data pane (invoke) reads
// one immutable configuration version per call and never writes it.
class CapabilityInstance {
 public:
  CapabilityInstance(std::string instance_id, registry::CapabilityDescriptor descriptor);
  virtual ~CapabilityInstance() = default;

  CapabilityInstance(const CapabilityInstance&) = delete;
  CapabilityInstance& operator=(const CapabilityInstance&) = delete;

  const std::string& instance_id() const { return instance_id_; }
  const std::string& descriptor_ref() const { return descriptor_.capability_id; }
  const registry::CapabilityDescriptor& descriptor() const { return descriptor_; }
  InstanceState state() const { return state_.load(); }

  // Data-pane operations and the input slots each reads.
  virtual std::map<std::string, std::set<std::string>> operations() const = 0;

  // --- control pane ---

  // Validates and activates a new configuration version; the previous one is
  // kept for rollback. Throws kInvalidConfigKey, kInvalidConfigValue,
  // kPolicyGrammarUnsupported; on error nothing changes.
  void configure(const Params& config, const std::vector<policy::ConcretePolicy>& policies);
  // Reverts to the previous version. Throws kInvalidArgument if none.
  void rollback();
  void fail();

  std::shared_ptr<const InstanceConfig> current() const;
  std::vector<policy::ConcretePolicy> policy_store() const;

  // --- data pane ---

  // Throws kInstanceNotActive unless active, kInvalidArgument for unknown
  // operations.
  CapabilityResult invoke(const std::string& operation, const Params& inputs) const;

 protected:
  // Both throw on a rejected configuration.
  virtual void check_config(const Params& config) const = 0;
  virtual void check_policies(const std::vector<policy::ConcretePolicy>& policies) const;
  virtual CapabilityResult perform(const std::string& operation, const Params& inputs,
                                   const InstanceConfig& config) const = 0;

  // Helper for check_config implementations.
  static void allow_keys(const Params& config, const std::set<std::string>& allowed,
                         const std::set<std::string>& prefixes = {});

 private:
  const std::string instance_id_;
  const registry::CapabilityDescriptor descriptor_;
  std::atomic<InstanceState> state_{InstanceState::kConfigured};
  std::mutex control_mu_;
  std::shared_ptr<const InstanceConfig> current_;
  std::vector<std::shared_ptr<const InstanceConfig>> history_;
};

}  // namespace govgw::capability

#endif  // GOVGW_CAPABILITY_INSTANCE_HPP_
