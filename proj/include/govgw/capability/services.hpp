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
#ifndef GOVGW_CAPABILITY_SERVICES_HPP_
#define GOVGW_CAPABILITY_SERVICES_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "govgw/capability/audit.hpp"
#include "govgw/capability/instance.hpp"

namespace govgw::capability {

// Header carrying STS-issued assertions, ';'-separated.
inline constexpr std::string_view kAssertionsHeader = "X-SecPAL-Assertions";
inline constexpr std::string_view kProofHeader = "X-Proof-Id";

// http-basic: apply(login, password) emits the Authorization header. Empty
// inputs fall back to config login/password.
class BasicAuthService : public CapabilityInstance {
 public:
  using CapabilityInstance::CapabilityInstance;
  std::map<std::string, std::set<std::string>> operations() const override;

 protected:
  void check_config(const Params& config) const override;
  CapabilityResult perform(const std::string& op, const Params& in,
                           const InstanceConfig& cfg) const override;
};

// xml-token: issue(login, password, issued_at) emits the token document;
// validate(token, now) checks schema, credential table (config
// credential.<login>) and age against max_age_seconds, inclusive.
class XmlTokenService : public CapabilityInstance {
 public:
  using CapabilityInstance::CapabilityInstance;
  std::map<std::string, std::set<std::string>> operations() const override;

 protected:
  void check_config(const Params& config) const override;
  CapabilityResult perform(const std::string& op, const Params& in,
                           const InstanceConfig& cfg) const override;
};

// token-secpal: issue(subject) vouches for the subject with every stored
// assertion the service itself states about it.
class SecpalTokenService : public CapabilityInstance {
 public:
  using CapabilityInstance::CapabilityInstance;
  std::map<std::string, std::set<std::string>> operations() const override;

 protected:
  void check_config(const Params& config) const override;
  void check_policies(const std::vector<policy::ConcretePolicy>& policies) const override;
  CapabilityResult perform(const std::string& op, const Params& in,
                           const InstanceConfig& cfg) const override;
};

// secpal-pdp: authorize(subject, action, resource, presented_assertions)
// permits iff "<resource_owner> says <subject> can <action> <resource>"
// follows from the policy store plus the presented assertions.
class SecpalPdpService : public CapabilityInstance {
 public:
  using CapabilityInstance::CapabilityInstance;
  std::map<std::string, std::set<std::string>> operations() const override;

 protected:
  void check_config(const Params& config) const override;
  void check_policies(const std::vector<policy::ConcretePolicy>& policies) const override;
  CapabilityResult perform(const std::string& op, const Params& in,
                           const InstanceConfig& cfg) const override;
};

// audit-log: record(action, instance_id, outcome, detail) appends to the
// bound trail, chained with config hash_alg (sha-256 by default).
class AuditLogService : public CapabilityInstance {
 public:
  AuditLogService(std::string instance_id, registry::CapabilityDescriptor descriptor,
                  std::shared_ptr<AuditTrail> trail);
  std::map<std::string, std::set<std::string>> operations() const override;
  HashAlg hash_alg() const;
  const std::shared_ptr<AuditTrail>& trail() const { return trail_; }

 protected:
  void check_config(const Params& config) const override;
  CapabilityResult perform(const std::string& op, const Params& in,
                           const InstanceConfig& cfg) const override;

 private:
  std::shared_ptr<AuditTrail> trail_;
};

// identity-transform: transform(...) re-emits inputs as headers, renamed
// per config rename.<from> = <to>.
class IdentityTransformService : public CapabilityInstance {
 public:
  using CapabilityInstance::CapabilityInstance;
  std::map<std::string, std::set<std::string>> operations() const override;

 protected:
  void check_config(const Params& config) const override;
  CapabilityResult perform(const std::string& op, const Params& in,
                           const InstanceConfig& cfg) const override;
};

struct ServiceEnvironment {
  std::shared_ptr<AuditTrail> audit_trail;  // required for audit-log
};

// Throws kInvalidDescriptor for mechanisms without an implementation.
std::shared_ptr<CapabilityInstance> make_instance(const std::string& instance_id,
                                                  const registry::CapabilityDescriptor& d,
                                                  const ServiceEnvironment& env);

struct OperationBinding {
  std::string operation;
  // slot -> source: context.<field>, header.<Name>, literal:<text>; several
  // sources may be given comma-separated, first present wins.
  std::map<std::string, std::string> inputs;
};

// How the gateway feeds each mechanism by default.
OperationBinding default_binding(const std::string& mechanism);

// Live instances, for leak checks and failure handling.
class InstancePool {
 public:
  std::shared_ptr<CapabilityInstance> create(const std::string& profile_id,
                                             const registry::CapabilityDescriptor& d,
                                             const ServiceEnvironment& env);
  void retire(const std::string& instance_id);
  std::shared_ptr<CapabilityInstance> get(const std::string& instance_id) const;
  std::set<std::string> live() const;
  std::vector<std::shared_ptr<CapabilityInstance>> of_capability(
      const std::string& capability_id) const;

 private:
  mutable std::mutex mu_;
  std::uint64_t next_ = 1;
  std::map<std::string, std::shared_ptr<CapabilityInstance>> live_;
};

}  // namespace govgw::capability

#endif  // GOVGW_CAPABILITY_SERVICES_HPP_
