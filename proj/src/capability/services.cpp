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
#include "govgw/capability/services.hpp"

#include <chrono>

#include "govgw/capability/codec.hpp"
#include "govgw/capability/xml_token.hpp"
#include "govgw/common/error.hpp"
#include "govgw/common/time.hpp"
#include "govgw/policy/derivation.hpp"

namespace govgw::capability {

namespace {

std::string input_or(const Params& in, const std::string& key, const Params& config) {
  auto it = in.find(key);
  if (it != in.end() && !it->second.empty()) return it->second;
  auto c = config.find(key);
  return c == config.end() ? std::string() : c->second;
}

std::string get(const Params& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? std::string() : it->second;
}

std::vector<policy::Assertion> parse_store(const std::vector<policy::ConcretePolicy>& policies) {
  std::vector<policy::Assertion> out;
  for (const auto& p : policies) {
    auto parsed = policy::parse_assertions(p.body);
    out.insert(out.end(), parsed.begin(), parsed.end());
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(sep, pos);
    if (next == std::string::npos) next = text.size();
    if (next > pos) out.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

const std::string& subject_of(const policy::Fact& f) {
  if (const auto* c = std::get_if<policy::Can>(&f.form)) return c->subject;
  if (const auto* a = std::get_if<policy::CanActAs>(&f.form)) return a->subject;
  return std::get<policy::CanSay>(f.form).delegate;
}

void require_non_negative_int(const Params& config, const std::string& key) {
  auto it = config.find(key);
  if (it == config.end()) return;
  const std::string& v = it->second;
  if (v.empty() || v.size() > 9 || v.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(Errc::kInvalidConfigValue, key + " must be a non-negative integer");
  }
}

}  // namespace

// ---------------------------------------------------------------- http-basic

std::map<std::string, std::set<std::string>> BasicAuthService::operations() const {
  return {{"apply", {"login", "password"}}};
}

void BasicAuthService::check_config(const Params& config) const {
  allow_keys(config, {"login", "password"});
}

CapabilityResult BasicAuthService::perform(const std::string& op, const Params& in,
                                           const InstanceConfig& cfg) const {
  std::string login = input_or(in, "login", cfg.config);
  std::string password = input_or(in, "password", cfg.config);
  if (login.empty() || password.empty()) {
    return CapabilityResult::error("http-basic." + op, "MissingCredential",
                                   login.empty() ? "login is empty" : "password is empty");
  }
  if (login.find(':') != std::string::npos) {
    return CapabilityResult::error("http-basic." + op, "MissingCredential",
                                   "login may not contain ':'");
  }
  return CapabilityResult::success(
      "http-basic." + op, {{"header:Authorization", "Basic " + base64_encode(login + ":" + password)}},
      "basic credentials for " + login);
}

// ----------------------------------------------------------------- xml-token

std::map<std::string, std::set<std::string>> XmlTokenService::operations() const {
  return {{"issue", {"login", "password", "issued_at"}}, {"validate", {"token", "now"}}};
}

void XmlTokenService::check_config(const Params& config) const {
  allow_keys(config, {"schema_ref", "max_age_seconds", "login", "password"}, {"credential."});
  auto schema = config.find("schema_ref");
  if (schema != config.end() && schema->second != kTokenNamespace) {
    throw Error(Errc::kInvalidConfigValue, "unsupported token schema " + schema->second);
  }
  require_non_negative_int(config, "max_age_seconds");
}

CapabilityResult XmlTokenService::perform(const std::string& op, const Params& in,
                                          const InstanceConfig& cfg) const {
  const std::string action = "xml-token." + op;
  if (op == "issue") {
    XmlToken token{input_or(in, "login", cfg.config), input_or(in, "password", cfg.config),
                   get(in, "issued_at")};
    if (token.login.empty() || token.password.empty()) {
      return CapabilityResult::error(action, "MissingCredential", "login or password is empty");
    }
    try {
      parse_iso8601(token.issued);
    } catch (const Error& e) {
      return CapabilityResult::error(action, "InvalidArgument", "issued_at: " + e.detail());
    }
    std::string doc = render_token(token);
    return CapabilityResult::success(action, {{"body:prepend", doc}, {"token", doc}},
                                     "token issued for " + token.login);
  }
  XmlToken token;
  try {
    token = parse_token(get(in, "token"));
  } catch (const Error& e) {
    return CapabilityResult::denied(action, "SchemaViolation", e.detail());
  }
  auto known = cfg.config.find("credential." + token.login);
  if (known == cfg.config.end() || known->second != token.password) {
    return CapabilityResult::denied(action, "UnknownPrincipal", "no credential for " + token.login);
  }
  const std::string now_text = get(in, "now");
  TimePoint now = now_text.empty() ? std::chrono::system_clock::now() : parse_iso8601(now_text);
  long max_age = std::stol(get(cfg.config, "max_age_seconds").empty()
                               ? std::string("300")
                               : get(cfg.config, "max_age_seconds"));
  TimePoint issued = parse_iso8601(token.issued);
  if (issued > now || now - issued > std::chrono::seconds(max_age)) {
    return CapabilityResult::denied(action, "TokenExpired",
                                    "issued " + token.issued + ", max age " +
                                        std::to_string(max_age) + " s");
  }
  return CapabilityResult::success(action, {{"login", token.login}}, "token valid");
}

// -------------------------------------------------------------- token-secpal

std::map<std::string, std::set<std::string>> SecpalTokenService::operations() const {
  return {{"issue", {"subject"}}};
}

void SecpalTokenService::check_config(const Params& config) const {
  allow_keys(config, {"principal", "login", "password"});
  auto p = config.find("principal");
  if (p == config.end() || !policy::is_identifier(p->second) || policy::is_variable(p->second)) {
    throw Error(Errc::kInvalidConfigValue, "principal must name the token service");
  }
}

void SecpalTokenService::check_policies(const std::vector<policy::ConcretePolicy>& policies) const {
  CapabilityInstance::check_policies(policies);
  parse_store(policies);
}

CapabilityResult SecpalTokenService::perform(const std::string& op, const Params& in,
                                             const InstanceConfig& cfg) const {
  const std::string action = "token-secpal." + op;
  const std::string subject = get(in, "subject");
  if (subject.empty()) return CapabilityResult::error(action, "MissingCredential", "no subject");
  const std::string principal = get(cfg.config, "principal");
  std::string vouched;
  std::size_t count = 0;
  for (const auto& a : parse_store(cfg.policies)) {
    if (a.issuer != principal || subject_of(a.fact) != subject) continue;
    if (!vouched.empty()) vouched += ';';
    vouched += policy::to_string(a);
    ++count;
  }
  return CapabilityResult::success(action, {{"header:" + std::string(kAssertionsHeader), vouched}},
                                   std::to_string(count) + " assertion(s) for " + subject);
}

// ---------------------------------------------------------------- secpal-pdp

std::map<std::string, std::set<std::string>> SecpalPdpService::operations() const {
  return {{"authorize", {"subject", "action", "resource", "presented_assertions"}}};
}

void SecpalPdpService::check_config(const Params& config) const {
  allow_keys(config, {"resource_owner"});
  auto p = config.find("resource_owner");
  if (p == config.end() || !policy::is_identifier(p->second) || policy::is_variable(p->second)) {
    throw Error(Errc::kInvalidConfigValue, "resource_owner must name a principal");
  }
}

void SecpalPdpService::check_policies(const std::vector<policy::ConcretePolicy>& policies) const {
  CapabilityInstance::check_policies(policies);
  parse_store(policies);
}

CapabilityResult SecpalPdpService::perform(const std::string& op, const Params& in,
                                           const InstanceConfig& cfg) const {
  const std::string action = "secpal-pdp." + op;
  std::vector<policy::Assertion> context = parse_store(cfg.policies);
  policy::Query query;
  try {
    for (const auto& line : split(get(in, "presented_assertions"), ';')) {
      context.push_back(policy::parse_assertion(line));
    }
    query = policy::parse_query(get(cfg.config, "resource_owner") + " says " + get(in, "subject") +
                                " can " + get(in, "action") + " " + get(in, "resource") + "?");
  } catch (const SyntaxError& e) {
    return CapabilityResult::denied(action, "SyntaxError", e.detail());
  }
  policy::Decision decision = policy::derive(context, query);
  if (!decision.permitted()) {
    return CapabilityResult::denied(action, "Deny", "no derivation of " + policy::to_string(query));
  }
  std::string proof_text;
  for (const auto& step : decision.proof) {
    proof_text += std::string(policy::rule_name(step.rule)) + " " +
                  policy::to_string(step.conclusion) + "\n";
  }
  std::string proof_id = "proof-" + hex_digest(HashAlg::kSha256, proof_text).substr(0, 16);
  return CapabilityResult::success(
      action, {{"proof_id", proof_id}, {"header:" + std::string(kProofHeader), proof_id}},
      "permit in " + std::to_string(decision.proof.size()) + " step(s)");
}

// ----------------------------------------------------------------- audit-log

AuditLogService::AuditLogService(std::string instance_id, registry::CapabilityDescriptor descriptor,
                                 std::shared_ptr<AuditTrail> trail)
    : CapabilityInstance(std::move(instance_id), std::move(descriptor)), trail_(std::move(trail)) {
  if (!trail_) throw Error(Errc::kInvalidArgument, "audit-log needs a trail");
}

std::map<std::string, std::set<std::string>> AuditLogService::operations() const {
  return {{"record", {"action", "instance_id", "outcome", "detail"}}};
}

HashAlg AuditLogService::hash_alg() const {
  auto c = current();
  if (!c) return HashAlg::kSha256;
  auto it = c->config.find("hash_alg");
  return it == c->config.end() ? HashAlg::kSha256 : hash_alg_from_string(it->second);
}

void AuditLogService::check_config(const Params& config) const {
  allow_keys(config, {"hash_alg"});
  auto it = config.find("hash_alg");
  if (it != config.end()) hash_alg_from_string(it->second);
}

CapabilityResult AuditLogService::perform(const std::string& op, const Params& in,
                                          const InstanceConfig& cfg) const {
  const std::string action = "audit-log." + op;
  auto alg_it = cfg.config.find("hash_alg");
  HashAlg alg = alg_it == cfg.config.end() ? HashAlg::kSha256 : hash_alg_from_string(alg_it->second);
  std::string instance = get(in, "instance_id");
  std::string outcome = get(in, "outcome");
  try {
    AuditRecord r = trail_->append(instance.empty() ? instance_id() : instance,
                                   get(in, "action").empty() ? action : get(in, "action"),
                                   outcome.empty() ? "success" : outcome, get(in, "detail"), alg);
    return CapabilityResult::success(action, {{"seq", std::to_string(r.seq)}, {"chain", r.chain}},
                                     "recorded seq " + std::to_string(r.seq));
  } catch (const Error& e) {
    return CapabilityResult::error(action, std::string(govgw::to_string(e.code())), e.detail());
  }
}

// -------------------------------------------------------- identity-transform

std::map<std::string, std::set<std::string>> IdentityTransformService::operations() const {
  return {{"transform", {}}};
}

void IdentityTransformService::check_config(const Params& config) const {
  allow_keys(config, {}, {"rename."});
  std::set<std::string> targets;
  for (const auto& [key, to] : config) {
    if (to.empty() || !targets.insert(to).second) {
      throw Error(Errc::kInvalidConfigValue, "rename targets must be distinct and non-empty");
    }
  }
}

CapabilityResult IdentityTransformService::perform(const std::string& op, const Params& in,
                                                   const InstanceConfig& cfg) const {
  Params out;
  for (const auto& [key, value] : in) {
    auto it = cfg.config.find("rename." + key);
    const std::string& name = it == cfg.config.end() ? key : it->second;
    if (!out.emplace("header:" + name, value).second) {
      return CapabilityResult::error("identity-transform." + op, "RenameCollision", name);
    }
  }
  return CapabilityResult::success("identity-transform." + op, out,
                                   std::to_string(out.size()) + " field(s)");
}

// ------------------------------------------------------------------- factory

std::shared_ptr<CapabilityInstance> make_instance(const std::string& instance_id,
                                                  const registry::CapabilityDescriptor& d,
                                                  const ServiceEnvironment& env) {
  if (d.mechanism == "http-basic") return std::make_shared<BasicAuthService>(instance_id, d);
  if (d.mechanism == "xml-token") return std::make_shared<XmlTokenService>(instance_id, d);
  if (d.mechanism == "token-secpal") return std::make_shared<SecpalTokenService>(instance_id, d);
  if (d.mechanism == "secpal-pdp") return std::make_shared<SecpalPdpService>(instance_id, d);
  if (d.mechanism == "audit-log") {
    return std::make_shared<AuditLogService>(instance_id, d, env.audit_trail);
  }
  if (d.mechanism == "identity-transform") {
    return std::make_shared<IdentityTransformService>(instance_id, d);
  }
  throw Error(Errc::kInvalidDescriptor, "no implementation for mechanism " + d.mechanism);
}

OperationBinding default_binding(const std::string& mechanism) {
  if (mechanism == "http-basic") {
    return {"apply", {{"login", "header.x-vms-login"}, {"password", "header.x-vms-password"}}};
  }
  if (mechanism == "xml-token") {
    return {"issue",
            {{"login", "header.x-vms-login"},
             {"password", "header.x-vms-password"},
             {"issued_at", "context.timestamp"}}};
  }
  if (mechanism == "token-secpal") return {"issue", {{"subject", "context.subject"}}};
  if (mechanism == "secpal-pdp") {
    return {"authorize",
            {{"subject", "context.subject"},
             {"action", "context.action"},
             {"resource", "context.resource"},
             {"presented_assertions", "header." + std::string(kAssertionsHeader)}}};
  }
  if (mechanism == "audit-log") return {"record", {}};
  if (mechanism == "identity-transform") return {"transform", {}};
  throw Error(Errc::kInvalidDescriptor, "no implementation for mechanism " + mechanism);
}

// --------------------------------------------------------------------- pool

std::shared_ptr<CapabilityInstance> InstancePool::create(const std::string& profile_id,
                                                         const registry::CapabilityDescriptor& d,
                                                         const ServiceEnvironment& env) {
  std::lock_guard lock(mu_);
  std::string id = profile_id + "." + d.mechanism + "." + std::to_string(next_++);
  auto instance = make_instance(id, d, env);
  live_.emplace(id, instance);
  return instance;
}

void InstancePool::retire(const std::string& instance_id) {
  std::lock_guard lock(mu_);
  live_.erase(instance_id);
}

std::shared_ptr<CapabilityInstance> InstancePool::get(const std::string& instance_id) const {
  std::lock_guard lock(mu_);
  auto it = live_.find(instance_id);
  return it == live_.end() ? nullptr : it->second;
}

std::set<std::string> InstancePool::live() const {
  std::lock_guard lock(mu_);
  std::set<std::string> out;
  for (const auto& [id, i] : live_) out.insert(id);
  return out;
}

std::vector<std::shared_ptr<CapabilityInstance>> InstancePool::of_capability(
    const std::string& capability_id) const {
  std::lock_guard lock(mu_);
  std::vector<std::shared_ptr<CapabilityInstance>> out;
  for (const auto& [id, i] : live_) {
    if (i->descriptor_ref() == capability_id) out.push_back(i);
  }
  return out;
}

}  // namespace govgw::capability
