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
#include "govgw/manager/manager.hpp"

#include <cstdio>
#include <thread>

#include "govgw/capability/codec.hpp"
#include "govgw/policy/dependencies.hpp"
#include "govgw/policy/transform.hpp"
#include "govgw/profile/document.hpp"
#include "govgw/profile/lifecycle.hpp"

namespace govgw::manager {

using nlohmann::json;
using profile::LifecycleState;
using profile::Requirement;
using profile::SecurityProfile;
using registry::CapabilityDescriptor;

namespace {

constexpr char kManagerInstance[] = "profile-manager";

std::string key(int step) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d-", step);
  return buf + std::string(step_action(step));
}

Error wrap(Errc code, const Error& cause) {
  return Error(code, std::string(to_string(cause.code())) + ": " + cause.detail());
}

bool valid_source(const std::string& source) {
  static const std::set<std::string> fields = {"subject", "action", "resource", "client_address",
                                               "timestamp"};
  if (source.rfind("literal:", 0) == 0) return true;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    std::size_t comma = source.find(',', pos);
    if (comma == std::string::npos) comma = source.size();
    std::string one = source.substr(pos, comma - pos);
    bool ok = (one.rfind("header.", 0) == 0 && one.size() > 7) ||
              (one.rfind("context.", 0) == 0 && fields.count(one.substr(8)));
    if (!ok) return false;
    pos = comma + 1;
  }
  return true;
}

std::set<std::string> operation_slots(const CapabilityDescriptor& d, const std::string& op) {
  auto probe = capability::make_instance(
      "probe", d, {std::make_shared<capability::AuditTrail>("probe")});
  auto ops = probe->operations();
  auto it = ops.find(op);
  return it == ops.end() ? std::set<std::string>{} : it->second;
}

capability::OperationBinding binding_for(const Requirement& r, const CapabilityDescriptor& d) {
  auto binding = capability::default_binding(r.mechanism);
  auto overrides = r.input_overrides();
  if (overrides.empty()) return binding;
  auto slots = operation_slots(d, binding.operation);
  for (const auto& [slot, source] : overrides) {
    if (!slots.count(slot)) {
      throw Error(Errc::kInvalidArgument, r.mechanism + "." + binding.operation + " has no input " + slot);
    }
    if (!valid_source(source)) {
      throw Error(Errc::kInvalidArgument, "bad input source '" + source + "' for " + slot);
    }
    binding.inputs[slot] = source;
  }
  return binding;
}

std::vector<CapabilityDescriptor> with_pattern(std::vector<CapabilityDescriptor> candidates,
                                               const Requirement& r, std::size_t index) {
  auto demanded = r.demanded_pattern();
  if (!demanded) return candidates;
  registry::InvocationPattern pattern;
  try {
    pattern = registry::pattern_from_string(*demanded);
  } catch (const Error&) {
    throw Error(Errc::kIncompatibleInvocationPattern,
                "requirement " + std::to_string(index) + " demands unknown pattern " + *demanded);
  }
  std::vector<CapabilityDescriptor> out;
  for (auto& c : candidates) {
    if (c.invocation_patterns.count(pattern)) out.push_back(std::move(c));
  }
  if (out.empty() && !candidates.empty()) {
    throw Error(Errc::kIncompatibleInvocationPattern,
                "requirement " + std::to_string(index) + " demands " + *demanded +
                    ", no candidate offers it");
  }
  return out;
}

std::string describe(const Requirement& r, std::size_t index) {
  return "requirement " + std::to_string(index) + " (" + r.category + "/" + r.mechanism + ")";
}

}  // namespace

ValidationReport check_missing_components(const SecurityProfile& profile,
                                          const profile::Taxonomy& taxonomy) {
  std::map<std::string, std::size_t> first_of;
  for (std::size_t i = 0; i < profile.requirements.size(); ++i) {
    first_of.emplace(profile.requirements[i].category, i);
  }
  ValidationReport report;
  for (const auto& rule : taxonomy.rules()) {
    auto it = first_of.find(rule.category);
    if (it == first_of.end()) continue;
    if (rule.kind == profile::DependencyKind::kRequiresCategory) {
      if (!first_of.count(rule.required)) {
        report.add("MissingDependency", rule.category + " requires " + rule.required, it->second);
      }
    } else if (first_of.size() < 2) {
      report.add("MissingDependency", rule.category + " requires another category", it->second);
    }
  }
  return report;
}

json EnactContext::to_json() const {
  return {{"route", route}, {"forward_target", forward_target}, {"bindings", bindings}};
}

EnactContext EnactContext::from_json(const json& j) {
  EnactContext c;
  try {
    c.route = j.value("route", "");
    c.forward_target = j.value("forward_target", "");
    if (j.contains("bindings")) c.bindings = j.at("bindings").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw Error(Errc::kMalformedDocument, std::string("enact context: ") + e.what());
  }
  return c;
}

std::string_view to_string(AdaptationKind k) {
  switch (k) {
    case AdaptationKind::kS1: return "S1";
    case AdaptationKind::kS2: return "S2";
    case AdaptationKind::kS3: return "S3";
    case AdaptationKind::kS4: return "S4";
    case AdaptationKind::kS5: return "S5";
    case AdaptationKind::kS6: return "S6";
  }
  return "?";
}

AdaptationKind adaptation_from_string(std::string_view name) {
  for (auto k : {AdaptationKind::kS1, AdaptationKind::kS2, AdaptationKind::kS3,
                 AdaptationKind::kS4, AdaptationKind::kS5, AdaptationKind::kS6}) {
    if (to_string(k) == name) return k;
  }
  throw Error(Errc::kInvalidArgument, "unknown adaptation kind '" + std::string(name) + "'");
}

void check_payload(const AdaptationRequest& request) {
  const json& p = request.payload;
  auto need = [&](const char* field, json::value_t type) {
    if (!p.is_object() || !p.contains(field) ||
        (p.at(field).type() != type &&
         !(type == json::value_t::number_unsigned && p.at(field).is_number_integer() &&
           p.at(field).get<long long>() >= 0))) {
      throw Error(Errc::kInvalidArgument, std::string(to_string(request.kind)) +
                                              " payload needs '" + field + "'");
    }
  };
  using V = json::value_t;
  switch (request.kind) {
    case AdaptationKind::kS1:
      need("requirement", V::number_unsigned);
      need("parameter", V::string);
      need("value", V::string);
      break;
    case AdaptationKind::kS2:
      need("requirement", V::object);
      break;
    case AdaptationKind::kS3:
      need("requirement", V::number_unsigned);
      need("slot", V::string);
      need("source", V::string);
      break;
    case AdaptationKind::kS4:
      need("capability_id", V::string);
      break;
    case AdaptationKind::kS5:
      need("descriptor", V::object);
      if (p.contains("replaces")) need("replaces", V::string);
      break;
    case AdaptationKind::kS6:
      need("requirement", V::number_unsigned);
      need("grammar", V::string);
      need("body", V::string);
      break;
  }
}

struct ProfileManager::Run {
  SecurityProfile profile;
  ManagementProcess process;
  std::set<std::string> excluded;
  std::vector<std::shared_ptr<capability::CapabilityInstance>> created;
  std::shared_ptr<const gateway::EnactedPipeline> pipeline;
  gateway::ReplayReport replay;
};

ProfileManager::ProfileManager(std::shared_ptr<registry::Registry> registry,
                               std::shared_ptr<profile::ProfileStore> profiles,
                               std::shared_ptr<profile::SnapshotStore> snapshots,
                               std::shared_ptr<gateway::Gateway> gateway,
                               policy::TemplateLibrary templates, RecoveryMode mode)
    : registry_(std::move(registry)),
      profiles_(std::move(profiles)),
      snapshots_(std::move(snapshots)),
      gateway_(std::move(gateway)),
      mode_(mode),
      templates_(std::move(templates)) {
  subscription_ =
      registry_->subscribe([this](const registry::AvailabilityEvent& e) { on_event(e); });
}

ProfileManager::~ProfileManager() {
  registry_->unsubscribe(subscription_);
  registry_->flush_events();
}

// ------------------------------------------------------------------ helpers

void ProfileManager::audit(const std::string& profile_id, const std::string& action,
                           const std::string& outcome, const std::string& detail) {
  auto current = gateway_->pipeline(profile_id);
  auto alg = current ? current->hash_alg() : capability::HashAlg::kSha256;
  gateway_->audits()->trail(profile_id)->append(kManagerInstance, action, outcome, detail, alg);
}

ProfileManager::Run ProfileManager::start(const SecurityProfile& profile,
                                          const std::string& label) {
  std::uint64_t seq;
  {
    std::lock_guard lock(mu_);
    seq = ++process_seq_;
  }
  Run run{profile, ManagementProcess(profile.profile_id + "." + label + "." + std::to_string(seq)),
          excluded(profile.profile_id), {}, nullptr, {}};
  return run;
}

namespace {

template <typename F>
json run_step(ManagementProcess& process, int step, const std::string& profile_id,
              const std::function<void(int, StepStatus)>& log, F&& body) {
  process.begin(step);
  json out;
  try {
    out = body();
  } catch (...) {
    process.fail();
    log(step, StepStatus::kFailed);
    throw;
  }
  process.complete(profile_id + "#" + key(step));
  log(step, StepStatus::kDone);
  return out;
}

}  // namespace

#define GOVGW_STEP(run, n, ...) run_step((run).process, (n), (run).profile.profile_id, log, [&]() -> json __VA_ARGS__)

const policy::PolicyTemplate* ProfileManager::find_template(const std::string& profile_id,
                                                            const std::string& id) const {
  {
    std::lock_guard lock(mu_);
    if (templates_.contains(id)) return &templates_.get(id);
  }
  auto extra = profiles_->record(profile_id, "policy_templates");
  if (extra && extra->contains(id)) {
    std::lock_guard lock(mu_);
    auto& self = const_cast<ProfileManager&>(*this);
    if (!self.templates_.contains(id)) {
      self.templates_.add(policy::PolicyTemplate(id, extra->at(id).at("grammar"),
                                                 extra->at(id).at("body")));
    }
    return &templates_.get(id);
  }
  throw Error(Errc::kUnknownTemplate, "no policy template '" + id + "'");
}

std::set<std::string> ProfileManager::excluded(const std::string& profile_id) const {
  std::set<std::string> out;
  if (auto stored = profiles_->record(profile_id, "excluded")) {
    out = stored->get<std::set<std::string>>();
  }
  std::lock_guard lock(mu_);
  auto it = excluded_.find(profile_id);
  if (it != excluded_.end()) out.insert(it->second.begin(), it->second.end());
  return out;
}

EnactContext ProfileManager::stored_context(const std::string& profile_id) const {
  auto record = profiles_->record(profile_id, "enact_context");
  return record ? EnactContext::from_json(*record) : EnactContext{};
}

SecurityProfile ProfileManager::restart_point(const SecurityProfile& current) const {
  if (current.state == LifecycleState::kDeposited) return current;
  if (current.state == LifecycleState::kFailed) {
    auto snap = snapshots_->latest(current.profile_id, LifecycleState::kDeposited);
    if (!snap) throw Error(Errc::kUnknownSnapshot, "no Deposited snapshot of " + current.profile_id);
    return snapshots_->restore(snap->snapshot_id());
  }
  throw Error(Errc::kIllegalTransition, "profile '" + current.profile_id + "' is " +
                                            std::string(profile::to_string(current.state)));
}

SecurityProfile ProfileManager::from_profile_complete(const SecurityProfile& current) const {
  auto snap = snapshots_->latest(current.profile_id, LifecycleState::kProfileComplete);
  if (!snap) {
    throw Error(Errc::kUnknownSnapshot, "no ProfileComplete snapshot of " + current.profile_id);
  }
  return profile::reopen(snapshots_->restore(snap->snapshot_id()), LifecycleState::kProfileComplete);
}

void ProfileManager::commit(Run& run) {
  const std::string& id = run.profile.profile_id;
  profiles_->put(run.profile);
  profiles_->set_record(id, "management_process", run.process.to_json());
  std::vector<std::string> retired;
  {
    std::lock_guard lock(mu_);
    processes_.insert_or_assign(id, run.process);
    if (run.pipeline) {
      std::vector<std::string> now;
      for (const auto& i : run.created) now.push_back(i->instance_id());
      retired = std::move(instances_[id]);
      instances_[id] = std::move(now);
    }
  }
  for (const auto& old : retired) pool_.retire(old);
}

void ProfileManager::rollback_instances(Run& run) {
  for (const auto& i : run.created) pool_.retire(i->instance_id());
  run.created.clear();
  std::lock_guard lock(mu_);
  processes_.insert_or_assign(run.profile.profile_id, run.process);
}

// ------------------------------------------------------------------- stages

void ProfileManager::consistency(Run& run) {
  const std::string id = run.profile.profile_id;
  const auto& taxonomy = registry_->taxonomy();
  const std::vector<Requirement> reqs = run.profile.requirements;
  const std::size_t n = reqs.size();
  std::function<void(int, StepStatus)> log = [&](int s, StepStatus st) {
    audit(id, "lifecycle-step", std::string(to_string(st)),
          "STEP " + std::to_string(s) + " " + std::string(step_action(s)) + " " +
              std::string(to_string(st)));
  };
  auto finish = [&](LifecycleState state, json content) {
    run.profile = profile::advance(run.profile, {state, std::move(content)});
    snapshots_->take(run.profile);
  };

  json a = json::object();
  a[key(1)] = GOVGW_STEP(run, 1, {
    auto report = validate_against_taxonomy(run.profile, taxonomy);
    if (!report.ok()) throw Error(Errc::kTaxonomyViolation, report.summary());
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({{"index", i},
                     {"category", reqs[i].category},
                     {"mechanism", reqs[i].mechanism},
                     {"attributes", reqs[i].match_attributes()}});
    }
    return out;
  });
  a[key(2)] = GOVGW_STEP(run, 2, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({{"index", i},
                     {"grammar", reqs[i].grammar ? json(*reqs[i].grammar) : json()},
                     {"template", reqs[i].policy_template_ref ? json(*reqs[i].policy_template_ref)
                                                              : json()}});
    }
    return out;
  });
  a[key(3)] = GOVGW_STEP(run, 3, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      auto pattern = reqs[i].demanded_pattern();
      out.push_back({{"index", i},
                     {"config", reqs[i].config_parameters()},
                     {"pattern", pattern ? json(*pattern) : json()}});
    }
    return out;
  });
  a[key(4)] = GOVGW_STEP(run, 4, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      json ops = {"create", "configure"};
      if (reqs[i].policy_template_ref) ops.push_back("push-policies");
      out.push_back({{"index", i}, {"operations", ops}});
    }
    return out;
  });
  finish(LifecycleState::kServicesDescribed, a);

  json b = json::object();
  b[key(5)] = GOVGW_STEP(run, 5, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      json ids = json::array();
      for (const auto& c : registry_->find_candidates(reqs[i])) ids.push_back(c.capability_id);
      if (ids.empty()) {
        throw Error(Errc::kNoCandidate, describe(reqs[i], i) + ": no available capability");
      }
      out.push_back({{"index", i}, {"candidates", ids}});
    }
    return out;
  });
  b[key(6)] = GOVGW_STEP(run, 6, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      if (!reqs[i].policy_template_ref) continue;
      const auto* t = find_template(id, *reqs[i].policy_template_ref);
      out.push_back({{"index", i},
                     {"template", t->id()},
                     {"grammar", t->grammar()},
                     {"required_keys", t->required_keys()}});
    }
    return out;
  });
  b[key(7)] = GOVGW_STEP(run, 7, {
    json out = json::array();
    for (const auto& t : run.profile.declared_transforms) {
      t.validate();
      out.push_back(profile::transform_json(t));
    }
    return out;
  });
  b[key(8)] = GOVGW_STEP(run, 8, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      if (!reqs[i].policy_template_ref) continue;
      out.push_back({{"index", i}, {"operations", {"instantiate", "transform", "push"}}});
    }
    return out;
  });
  finish(LifecycleState::kPoliciesSchemed, b);

  std::vector<CapabilityDescriptor> tentative(n);
  json c = json::object();
  c[key(9)] = GOVGW_STEP(run, 9, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      auto candidates = registry_->find_candidates(reqs[i]);
      if (candidates.empty()) {
        throw Error(Errc::kNoCandidate, describe(reqs[i], i) + ": no available capability");
      }
      tentative[i] = candidates.front();
      out.push_back({{"index", i}, {"capability_id", tentative[i].capability_id}});
    }
    return out;
  });
  c[key(10)] = GOVGW_STEP(run, 10, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      auto binding = binding_for(reqs[i], tentative[i]);
      out.push_back({{"index", i}, {"operation", binding.operation}, {"inputs", binding.inputs}});
    }
    return out;
  });
  c[key(11)] = GOVGW_STEP(run, 11, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      auto fitting = with_pattern(registry_->find_candidates(reqs[i]), reqs[i], i);
      if (fitting.empty()) {
        throw Error(Errc::kNoCandidate, describe(reqs[i], i) + ": no available capability");
      }
      tentative[i] = fitting.front();
      auto pattern = reqs[i].demanded_pattern()
                         ? *reqs[i].demanded_pattern()
                         : std::string(registry::to_string(*tentative[i].invocation_patterns.begin()));
      out.push_back({{"index", i},
                     {"capability_id", tentative[i].capability_id},
                     {"pattern", pattern}});
    }
    return out;
  });
  c[key(12)] = GOVGW_STEP(run, 12, {
    auto report = manager::check_missing_components(run.profile, taxonomy);
    if (!report.ok()) throw Error(Errc::kMissingDependency, report.summary());
    return json{{"missing_components", json::array()}};
  });
  finish(LifecycleState::kBindingsValidated, c);
}

void ProfileManager::instantiable(Run& run) {
  const std::string id = run.profile.profile_id;
  const std::vector<Requirement> reqs = run.profile.requirements;
  const std::size_t n = reqs.size();
  std::function<void(int, StepStatus)> log = [&](int s, StepStatus st) {
    audit(id, "lifecycle-step", std::string(to_string(st)),
          "STEP " + std::to_string(s) + " " + std::string(step_action(s)) + " " +
              std::string(to_string(st)));
  };
  auto finish = [&](LifecycleState state, json content) {
    run.profile = profile::advance(run.profile, {state, std::move(content)});
    snapshots_->take(run.profile);
  };

  std::vector<CapabilityDescriptor> selected(n);
  json a = json::object();
  a[key(13)] = GOVGW_STEP(run, 13, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      auto fitting = with_pattern(registry_->find_candidates(reqs[i], run.excluded), reqs[i], i);
      if (fitting.empty()) {
        throw Error(Errc::kNoCandidate, describe(reqs[i], i) + ": no available capability");
      }
      selected[i] = fitting.front();
      out.push_back({{"index", i},
                     {"capability_id", selected[i].capability_id},
                     {"provider", selected[i].provider},
                     {"grammars", selected[i].supported_grammars}});
    }
    return out;
  });
  a[key(14)] = GOVGW_STEP(run, 14, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      if (!reqs[i].policy_template_ref) continue;
      const auto* t = find_template(id, *reqs[i].policy_template_ref);
      auto chain = policy::find_transform_chain(t->grammar(), selected[i].supported_grammars,
                                                run.profile.declared_transforms);
      json steps = json();
      if (chain) {
        steps = json::array();
        for (const auto& s : *chain) steps.push_back(profile::transform_json(s));
      }
      out.push_back({{"index", i}, {"from", t->grammar()}, {"chain", steps}});
    }
    return out;
  });
  a[key(15)] = GOVGW_STEP(run, 15, {
    std::vector<policy::PolicyAssignment> assignments;
    policy::GrammarTable grammars;
    for (std::size_t i = 0; i < n; ++i) {
      grammars[selected[i].capability_id] = selected[i].supported_grammars;
      if (!reqs[i].policy_template_ref) continue;
      const auto* t = find_template(id, *reqs[i].policy_template_ref);
      assignments.push_back({{t->grammar(), t->body(), t->id()}, selected[i].capability_id});
    }
    auto report = policy::validate_policy_dependencies(assignments, run.profile.declared_transforms,
                                                       grammars);
    if (!report.ok()) throw Error(Errc::kGrammarMismatch, report.summary());
    return json{{"policies", assignments.size()}};
  });
  finish(LifecycleState::kProfileComplete, a);

  CoordinationProcess coordination;
  json b = json::object();
  b[key(16)] = GOVGW_STEP(run, 16, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({{"node", "configure-" + std::to_string(i)},
                     {"capability_id", selected[i].capability_id},
                     {"operations", {"create", "configure"}}});
    }
    return out;
  });
  b[key(17)] = GOVGW_STEP(run, 17, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      if (!reqs[i].policy_template_ref) continue;
      out.push_back({{"node", "policy-" + std::to_string(i)},
                     {"template", *reqs[i].policy_template_ref}});
    }
    return out;
  });
  b[key(18)] = GOVGW_STEP(run, 18, {
    coordination.add_node({"context", {}, {"bindings"}});
    std::vector<std::string> pipeline_inputs;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string s = std::to_string(i);
      std::vector<std::string> inputs = {"bindings"};
      if (reqs[i].policy_template_ref) {
        coordination.add_node({"policy-" + s, {"bindings"}, {"policy"}});
        inputs.push_back("policy");
      }
      coordination.add_node({"configure-" + s, inputs, {"instance"}});
      pipeline_inputs.push_back("step-" + s);
    }
    coordination.add_node({"pipeline", pipeline_inputs, {"pipeline"}});
    coordination.add_node({"expose", {"pipeline"}, {"endpoint"}});
    return coordination.to_json()["nodes"];
  });
  b[key(19)] = GOVGW_STEP(run, 19, {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string s = std::to_string(i);
      if (reqs[i].policy_template_ref) {
        coordination.add_edge({"context", "bindings", "policy-" + s, "bindings"});
        coordination.add_edge({"policy-" + s, "policy", "configure-" + s, "policy"});
      }
      coordination.add_edge({"context", "bindings", "configure-" + s, "bindings"});
      coordination.add_edge({"configure-" + s, "instance", "pipeline", "step-" + s});
    }
    coordination.add_edge({"pipeline", "pipeline", "expose", "pipeline"});
    return coordination.to_json()["edges"];
  });
  b[key(20)] = GOVGW_STEP(run, 20, {
    coordination.validate();
    return json{{"order", coordination.order()}};
  });
  json plan = json::array();
  for (const auto& node : coordination.order()) {
    std::string action = node == "context"    ? "collect-context"
                         : node == "pipeline" ? "assemble-pipeline"
                         : node == "expose"   ? "expose"
                         : node.rfind("policy-", 0) == 0 ? "instantiate-policy"
                                                         : "configure";
    plan.push_back({{"node", node}, {"action", action}});
  }
  b["coordination"] = coordination.to_json();
  b["management_process"] = plan;
  finish(LifecycleState::kInstantiable, b);
}

void ProfileManager::enactment(Run& run, const EnactContext& given, ExposeMode mode) {
  const std::string id = run.profile.profile_id;
  const std::vector<Requirement> reqs = run.profile.requirements;
  const std::size_t n = reqs.size();
  std::function<void(int, StepStatus)> log = [&](int s, StepStatus st) {
    audit(id, "lifecycle-step", std::string(to_string(st)),
          "STEP " + std::to_string(s) + " " + std::string(step_action(s)) + " " +
              std::string(to_string(st)));
  };
  auto finish = [&](LifecycleState state, json content) {
    run.profile = profile::advance(run.profile, {state, std::move(content)});
    snapshots_->take(run.profile);
  };

  const json& complete = run.profile.artifacts.at(LifecycleState::kProfileComplete);
  const json& plan = run.profile.artifacts.at(LifecycleState::kInstantiable);
  std::vector<std::string> selection(n);
  for (const auto& s : complete.at(key(13))) selection.at(s.at("index")) = s.at("capability_id");
  std::map<std::size_t, std::vector<profile::TransformDescriptor>> chains;
  for (const auto& c : complete.at(key(14))) {
    if (c.at("chain").is_null()) continue;
    auto& chain = chains[c.at("index").get<std::size_t>()];
    for (const auto& t : c.at("chain")) chain.push_back(profile::transform_from_json(t));
  }
  CoordinationProcess coordination = CoordinationProcess::from_json(plan.at("coordination"));

  EnactContext context = given;
  if (context.route.empty()) context.route = id;
  if (context.forward_target.empty()) context.forward_target = run.profile.target.endpoint;
  std::map<std::string, std::string> bindings = context.bindings;
  bindings.emplace("profile_id", id);
  bindings.emplace("owner", run.profile.owner);
  bindings.emplace("route", context.route);

  std::vector<CapabilityDescriptor> descriptors(n);
  json a = json::object();
  a[key(21)] = GOVGW_STEP(run, 21, {
    auto snap = snapshots_->latest(id, LifecycleState::kInstantiable);
    if (!snap) throw Error(Errc::kUnknownSnapshot, "no Instantiable snapshot of " + id);
    return json{{"snapshot_id", snap->snapshot_id()}};
  });
  a[key(22)] = GOVGW_STEP(run, 22, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      if (!registry_->contains(selection[i])) {
        throw Error(Errc::kCapabilityUnavailable, selection[i] + " is no longer registered");
      }
      descriptors[i] = registry_->get(selection[i]);
      if (descriptors[i].availability != registry::Availability::kAvailable) {
        throw Error(Errc::kCapabilityUnavailable, selection[i] + " is unavailable");
      }
      out.push_back({{"index", i}, {"capability_id", selection[i]}});
    }
    return out;
  });
  a[key(23)] = GOVGW_STEP(run, 23, {
    return json{{"route", context.route},
                {"forward_target", context.forward_target},
                {"interface", run.profile.target.interface_name},
                {"operations", run.profile.target.operations}};
  });
  a[key(24)] = GOVGW_STEP(run, 24, {
    auto owner = gateway_->route_owner(context.route);
    if (owner && *owner != id) {
      throw Error(Errc::kRouteConflict, context.route + " is served for " + *owner);
    }
    auto report = manager::check_missing_components(run.profile, registry_->taxonomy());
    if (!report.ok()) throw Error(Errc::kMissingDependency, report.summary());
    return json{{"route_free", true}};
  });
  finish(LifecycleState::kContextBound, a);

  std::vector<std::shared_ptr<capability::CapabilityInstance>> instances(n);
  std::vector<std::optional<policy::ConcretePolicy>> policies(n);
  std::vector<capability::Params> configs(n);
  json b = json::object();
  b[key(25)] = GOVGW_STEP(run, 25, {
    json out = json::array();
    capability::ServiceEnvironment env{gateway_->audits()->trail(id)};
    for (std::size_t i = 0; i < n; ++i) {
      instances[i] = pool_.create(id, descriptors[i], env);
      run.created.push_back(instances[i]);
      out.push_back({{"index", i}, {"instance_id", instances[i]->instance_id()}});
    }
    return out;
  });
  b[key(26)] = GOVGW_STEP(run, 26, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      if (!reqs[i].policy_template_ref) continue;
      const auto* t = find_template(id, *reqs[i].policy_template_ref);
      policies[i] = policy::instantiate_template(*t, bindings).policy;
      out.push_back({{"index", i}, {"policy", policy::policy_json(*policies[i])}});
    }
    return out;
  });
  b[key(27)] = GOVGW_STEP(run, 27, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [k, v] : reqs[i].config_parameters()) {
        policy::PolicyTemplate value("config." + k, "text", v);
        configs[i][k] = policy::instantiate_template(value, bindings).policy.body;
      }
      out.push_back({{"index", i}, {"config", configs[i]}});
    }
    return out;
  });
  finish(LifecycleState::kPoliciesRefined, b);

  json c = json::object();
  c[key(28)] = GOVGW_STEP(run, 28, {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      if (reqs[i].category != "transformation") continue;
      out.push_back({{"index", i}, {"instance_id", instances[i]->instance_id()}});
    }
    return out;
  });
  c[key(29)] = GOVGW_STEP(run, 29, {
    json out = json::array();
    for (const auto& [i, chain] : chains) {
      if (!policies.at(i)) continue;
      policies[i] = policy::retarget(*policies[i], chain);
      out.push_back({{"index", i}, {"grammar", policies[i]->grammar}});
    }
    return out;
  });
  c[key(30)] = GOVGW_STEP(run, 30, {
    std::vector<policy::PolicyAssignment> assignments;
    policy::GrammarTable grammars;
    for (std::size_t i = 0; i < n; ++i) {
      grammars[instances[i]->instance_id()] = descriptors[i].supported_grammars;
      if (policies[i]) assignments.push_back({*policies[i], instances[i]->instance_id()});
    }
    auto report = policy::validate_policy_dependencies(assignments, {}, grammars);
    if (!report.ok()) throw Error(Errc::kGrammarMismatch, report.summary());
    return json{{"policies", assignments.size()}};
  });
  finish(LifecycleState::kTransformsRefined, c);

  const std::uint64_t version = [&] {
    std::uint64_t v = gateway_->next_version(id);
    auto published = profiles_->record(id, "pipeline");
    if (published && published->contains("version")) {
      v = std::max<std::uint64_t>(v, published->at("version").get<std::uint64_t>() + 1);
    }
    return v;
  }();
  std::vector<std::string> order;
  json d = json::object();
  d[key(31)] = GOVGW_STEP(run, 31, {
    json out = json::array();
    for (const auto& node : coordination.nodes()) out.push_back(node.id);
    return out;
  });
  d[key(32)] = GOVGW_STEP(run, 32, {
    return json{{"node", "expose"}, {"route", context.route}};
  });
  d[key(33)] = GOVGW_STEP(run, 33, {
    json out = json::object();
    for (const auto& node : coordination.nodes()) {
      auto dash = node.id.rfind('-');
      if (node.id.rfind("configure-", 0) == 0 || node.id.rfind("policy-", 0) == 0) {
        out[node.id] = instances.at(std::stoul(node.id.substr(dash + 1)))->instance_id();
      } else if (node.id == "pipeline") {
        out[node.id] = id + "-p" + std::to_string(version);
      } else if (node.id == "expose") {
        out[node.id] = context.route;
      } else {
        out[node.id] = id;
      }
    }
    return out;
  });
  d[key(34)] = GOVGW_STEP(run, 34, { return coordination.to_json()["edges"]; });
  d[key(35)] = GOVGW_STEP(run, 35, {
    coordination.validate();
    order = coordination.order();
    return json{{"order", order}};
  });
  finish(LifecycleState::kCoordinationBound, d);

  json e = json::object();
  e[key(36)] = GOVGW_STEP(run, 36, {
    json out = json::array();
    for (const auto& node : order) {
      if (node.rfind("configure-", 0) != 0) continue;
      std::size_t i = std::stoul(node.substr(10));
      std::vector<policy::ConcretePolicy> store;
      if (policies[i]) store.push_back(*policies[i]);
      try {
        instances[i]->configure(configs[i], store);
      } catch (const Error& err) {
        throw Error(Errc::kPolicyPushFailure, instances[i]->instance_id() + ": " +
                                                  std::string(to_string(err.code())) + ": " +
                                                  err.detail());
      }
      out.push_back({{"instance_id", instances[i]->instance_id()},
                     {"config_version", instances[i]->current()->version}});
    }
    return out;
  });
  e[key(37)] = GOVGW_STEP(run, 37, {
    std::vector<gateway::PipelineStep> steps;
    for (std::size_t i = 0; i < n; ++i) {
      auto binding = binding_for(reqs[i], descriptors[i]);
      steps.push_back({instances[i], binding.operation, binding.inputs,
                       reqs[i].category == "audit" ? gateway::OnDeny::kAnnotate
                                                   : gateway::OnDeny::kReject});
    }
    run.pipeline = std::make_shared<gateway::EnactedPipeline>(id, version, context.route,
                                                              std::move(steps),
                                                              context.forward_target);
    return run.pipeline->descriptor();
  });
  e[key(38)] = GOVGW_STEP(run, 38, {
    if (mode == ExposeMode::kReplay && gateway_->has_endpoint(id)) {
      run.replay = gateway_->replay(id, run.pipeline);
      return json{{"route", context.route},
                  {"version", version},
                  {"replay",
                   {{"buffered", run.replay.buffered},
                    {"replayed", run.replay.replayed},
                    {"rejected", run.replay.rejected}}}};
    }
    gateway_->expose(run.pipeline);
    return json{{"route", context.route}, {"version", version}};
  });
  e[key(39)] = GOVGW_STEP(run, 39, {
    profiles_->set_record(id, "pipeline", run.pipeline->descriptor());
    json history = profiles_->record(id, "pipeline_history").value_or(json::array());
    history.push_back(run.pipeline->descriptor());
    profiles_->set_record(id, "pipeline_history", history);
    profiles_->set_record(id, "enact_context", context.to_json());
    return json{{"pipeline_id", run.pipeline->pipeline_id()}, {"route", context.route}};
  });
  finish(LifecycleState::kEnacted, e);
}

#undef GOVGW_STEP

// --------------------------------------------------------------- operations

SecurityProfile ProfileManager::deposit(SecurityProfile profile) {
  profile.state = LifecycleState::kDeposited;
  profile.failure.reset();
  profile.artifacts.clear();
  profiles_->deposit(profile);
  snapshots_->take(profile);
  audit(profile.profile_id, "deposit", "done", "owner=" + profile.owner);
  return profile;
}

SecurityProfile ProfileManager::run_consistency_stages(const std::string& profile_id) {
  auto lock = profiles_->lock_profile(profile_id);
  Run run = start(restart_point(profiles_->get(profile_id)), "consistency");
  try {
    consistency(run);
  } catch (const Error& e) {
    run.profile = profile::fail(run.profile, std::string(to_string(e.code())) + ": " + e.detail());
    commit(run);
    throw;
  }
  commit(run);
  return run.profile;
}

ValidationReport ProfileManager::check_missing_components(const std::string& profile_id) const {
  return manager::check_missing_components(profiles_->get(profile_id), registry_->taxonomy());
}

SecurityProfile ProfileManager::build_instantiable(const std::string& profile_id) {
  auto lock = profiles_->lock_profile(profile_id);
  SecurityProfile current = profiles_->get(profile_id);
  if (current.state == LifecycleState::kFailed && current.failure &&
      !profile::before(current.failure->stage, LifecycleState::kBindingsValidated) &&
      profile::before(current.failure->stage, LifecycleState::kInstantiable)) {
    auto snap = snapshots_->latest(profile_id, LifecycleState::kBindingsValidated);
    if (snap) current = snapshots_->restore(snap->snapshot_id());
  }
  if (current.state != LifecycleState::kBindingsValidated) {
    throw Error(Errc::kIllegalTransition, "profile '" + profile_id + "' is " +
                                              std::string(profile::to_string(current.state)) +
                                              ", expected BindingsValidated");
  }
  Run run = start(current, "instantiation");
  try {
    instantiable(run);
  } catch (const Error& e) {
    run.profile = profile::fail(run.profile, std::string(to_string(e.code())) + ": " + e.detail());
    commit(run);
    throw;
  }
  commit(run);
  return run.profile;
}

std::shared_ptr<const gateway::EnactedPipeline> ProfileManager::enact(
    const std::string& profile_id, const EnactContext& context) {
  auto lock = profiles_->lock_profile(profile_id);
  SecurityProfile current = profiles_->get(profile_id);
  if (current.state == LifecycleState::kEnacted) {
    throw Error(Errc::kAlreadyEnacted, "profile '" + profile_id + "' is already enacted");
  }
  if (current.state != LifecycleState::kInstantiable) {
    throw Error(Errc::kIllegalTransition, "profile '" + profile_id + "' is " +
                                              std::string(profile::to_string(current.state)) +
                                              ", expected Instantiable");
  }
  Run run = start(current, "enactment");
  try {
    enactment(run, context, ExposeMode::kExpose);
  } catch (const Error&) {
    rollback_instances(run);
    profiles_->set_record(profile_id, "management_process", run.process.to_json());
    throw;
  }
  commit(run);
  return run.pipeline;
}

SecurityProfile ProfileManager::restore(const std::string& snapshot_id) {
  auto snap = snapshots_->get(snapshot_id);
  if (!snap) throw Error(Errc::kUnknownSnapshot, "no snapshot '" + snapshot_id + "'");
  auto lock = profiles_->lock_profile(snap->profile_id());
  SecurityProfile restored = snapshots_->restore(snapshot_id);
  profiles_->put(restored);
  audit(restored.profile_id, "restore", "done", snapshot_id);
  return restored;
}

std::shared_ptr<const gateway::EnactedPipeline> ProfileManager::run_full(
    const std::string& profile_id, const EnactContext& context) {
  auto lock = profiles_->lock_profile(profile_id);
  Run run = start(restart_point(profiles_->get(profile_id)), "full");
  try {
    consistency(run);
    instantiable(run);
  } catch (const Error& e) {
    run.profile = profile::fail(run.profile, std::string(to_string(e.code())) + ": " + e.detail());
    commit(run);
    throw;
  }
  SecurityProfile ready = run.profile;
  try {
    enactment(run, context, ExposeMode::kExpose);
  } catch (const Error&) {
    rollback_instances(run);
    run.profile = ready;
    run.pipeline.reset();
    commit(run);
    throw;
  }
  commit(run);
  return run.pipeline;
}

SecurityProfile ProfileManager::adapt(const AdaptationRequest& request) {
  check_payload(request);
  const std::string& id = request.profile_id;
  const json& p = request.payload;
  auto lock = profiles_->lock_profile(id);
  const SecurityProfile current = profiles_->get(id);
  const bool enacted = current.state == LifecycleState::kEnacted;
  if (request.kind == AdaptationKind::kS2) {
    if (current.state == LifecycleState::kFailed ||
        profile::before(current.state, LifecycleState::kInstantiable)) {
      throw Error(Errc::kIllegalTransition, "S2 needs a profile at Instantiable or later");
    }
  } else if (!enacted) {
    throw Error(Errc::kIllegalTransition, std::string(to_string(request.kind)) +
                                              " needs an enacted profile");
  }
  auto requirement_at = [&](SecurityProfile& prof) -> Requirement& {
    auto i = p.at("requirement").get<std::size_t>();
    if (i >= prof.requirements.size()) {
      throw Error(Errc::kInvalidArgument, "no requirement " + std::to_string(i));
    }
    return prof.requirements[i];
  };

  SecurityProfile base;
  std::set<std::string> exclude = excluded(id);
  std::optional<std::pair<std::string, json>> new_template;
  switch (request.kind) {
    case AdaptationKind::kS2: {
      base.profile_id = current.profile_id;
      base.owner = current.owner;
      base.target = current.target;
      base.requirements = current.requirements;
      base.declared_transforms = current.declared_transforms;
      base.requirements.push_back(profile::requirement_from_json(p.at("requirement")));
      base.version = current.version + 1;
      snapshots_->take(base);
      break;
    }
    case AdaptationKind::kS1:
    case AdaptationKind::kS6:
    case AdaptationKind::kS3: {
      base = from_profile_complete(current);
      Requirement& r = requirement_at(base);
      if (request.kind == AdaptationKind::kS1) {
        r.attributes[std::string(profile::kConfigPrefix) + p.at("parameter").get<std::string>()] =
            p.at("value").get<std::string>();
      } else if (request.kind == AdaptationKind::kS3) {
        r.attributes[std::string(profile::kInputPrefix) + p.at("slot").get<std::string>()] =
            p.at("source").get<std::string>();
      } else {
        std::string tid = id + ".policy." + std::to_string(p.at("requirement").get<std::size_t>()) +
                          ".v" + std::to_string(current.version + 1);
        policy::PolicyTemplate tmpl(tid, p.at("grammar"), p.at("body"));
        {
          std::lock_guard g(mu_);
          if (!templates_.contains(tid)) templates_.add(tmpl);
        }
        new_template = {tid, {{"grammar", tmpl.grammar()}, {"body", tmpl.body()}}};
        r.policy_template_ref = tid;
      }
      auto report = validate_against_taxonomy(base, registry_->taxonomy());
      if (!report.ok()) {
        throw Error(Errc::kChangeRejected, "TaxonomyViolation: " + report.summary());
      }
      break;
    }
    case AdaptationKind::kS5:
      registry_->register_capability(registry::descriptor_from_json(p.at("descriptor")));
      [[fallthrough]];
    case AdaptationKind::kS4: {
      std::string old = request.kind == AdaptationKind::kS4 ? p.at("capability_id").get<std::string>()
                                                            : p.value("replaces", "");
      if (!old.empty()) exclude.insert(old);
      base = from_profile_complete(current);
      break;
    }
  }

  Run run = start(base, "adapt-" + std::string(to_string(request.kind)));
  run.excluded = exclude;
  audit(id, "adapt", "begin", std::string(to_string(request.kind)));
  try {
    if (request.kind == AdaptationKind::kS2) consistency(run);
    instantiable(run);
    if (enacted) enactment(run, stored_context(id), ExposeMode::kExpose);
  } catch (const Error& e) {
    rollback_instances(run);
    audit(id, "adapt", "rejected", std::string(to_string(e.code())) + ": " + e.detail());
    bool replacement = request.kind == AdaptationKind::kS4 || request.kind == AdaptationKind::kS5;
    if (replacement && e.code() == Errc::kNoCandidate) throw wrap(Errc::kNoReplacement, e);
    throw wrap(Errc::kChangeRejected, e);
  }
  if (new_template) {
    json extra = profiles_->record(id, "policy_templates").value_or(json::object());
    extra[new_template->first] = new_template->second;
    profiles_->set_record(id, "policy_templates", extra);
  }
  {
    std::lock_guard g(mu_);
    excluded_[id] = exclude;
  }
  profiles_->set_record(id, "excluded", exclude);
  commit(run);
  audit(id, "adapt", "done", std::string(to_string(request.kind)));
  return run.profile;
}

// ----------------------------------------------------------------- recovery

RecoveryOutcome ProfileManager::on_capability_failure(const std::string& profile_id,
                                                      const std::string& capability_id) {
  return recover(profile_id, capability_id);
}

RecoveryOutcome ProfileManager::recover(const std::string& profile_id,
                                        const std::string& capability_id) {
  RecoveryOutcome outcome{profile_id, capability_id, false, {}, ""};
  auto lock = profiles_->lock_profile(profile_id);
  SecurityProfile current = profiles_->get(profile_id);
  if (current.state != LifecycleState::kEnacted) {
    outcome.error = "IllegalTransition";
    return outcome;
  }
  if (gateway_->has_endpoint(profile_id)) gateway_->enter_buffering(profile_id);
  audit(profile_id, "recovery", "begin", "capability=" + capability_id);
  {
    std::lock_guard g(mu_);
    excluded_[profile_id].insert(capability_id);
  }
  Run run = start(from_profile_complete(current), "recovery");
  try {
    instantiable(run);
    enactment(run, stored_context(profile_id), ExposeMode::kReplay);
  } catch (const Error& e) {
    rollback_instances(run);
    outcome.error = e.code() == Errc::kNoCandidate ? "NoReplacement"
                                                   : std::string(to_string(e.code()));
    if (gateway_->has_endpoint(profile_id)) gateway_->mark_unavailable(profile_id);
    {
      std::lock_guard g(mu_);
      stranded_.insert({profile_id, capability_id});
    }
    audit(profile_id, "recovery", "failed", outcome.error + ": " + e.detail());
    return outcome;
  }
  profiles_->set_record(profile_id, "excluded", run.excluded);
  commit(run);
  {
    std::lock_guard g(mu_);
    for (auto it = stranded_.begin(); it != stranded_.end();) {
      it = it->first == profile_id ? stranded_.erase(it) : std::next(it);
    }
  }
  outcome.recovered = true;
  outcome.replay = run.replay;
  audit(profile_id, "recovery", "end",
        "buffered=" + std::to_string(run.replay.buffered) +
            " replayed=" + std::to_string(run.replay.replayed) +
            " rejected=" + std::to_string(run.replay.rejected));
  return outcome;
}

void ProfileManager::on_event(const registry::AvailabilityEvent& event) {
  std::vector<std::pair<std::string, std::string>> todo;
  if (event.deregistered || event.availability == registry::Availability::kUnavailable) {
    std::set<std::string> affected;
    {
      std::lock_guard g(mu_);
      for (const auto& [profile_id, ids] : instances_) {
        for (const auto& iid : ids) {
          auto inst = pool_.get(iid);
          if (inst && inst->descriptor_ref() == event.capability_id) {
            inst->fail();
            affected.insert(profile_id);
          }
        }
      }
    }
    for (const auto& profile_id : affected) {
      if (gateway_->has_endpoint(profile_id)) gateway_->enter_buffering(profile_id);
      todo.emplace_back(profile_id, event.capability_id);
    }
  } else {
    std::lock_guard g(mu_);
    for (const auto& [profile_id, capability_id] : stranded_) {
      if (capability_id == event.capability_id) excluded_[profile_id].erase(capability_id);
      todo.emplace_back(profile_id, capability_id);
    }
  }
  if (todo.empty()) return;
  if (mode_ == RecoveryMode::kDeferred) {
    std::lock_guard g(mu_);
    for (auto& t : todo) pending_.push_back(std::move(t));
    return;
  }
  for (const auto& [profile_id, capability_id] : todo) recover(profile_id, capability_id);
}

std::vector<RecoveryOutcome> ProfileManager::run_pending_recoveries() {
  std::vector<RecoveryOutcome> out;
  while (true) {
    std::pair<std::string, std::string> next;
    {
      std::lock_guard g(mu_);
      if (pending_.empty()) return out;
      next = pending_.front();
      pending_.pop_front();
    }
    out.push_back(recover(next.first, next.second));
  }
}

std::size_t ProfileManager::pending_recoveries() const {
  std::lock_guard g(mu_);
  return pending_.size();
}

std::optional<ManagementProcess> ProfileManager::last_process(const std::string& profile_id) const {
  std::lock_guard g(mu_);
  auto it = processes_.find(profile_id);
  if (it == processes_.end()) return std::nullopt;
  return it->second;
}

std::set<std::string> ProfileManager::live_instances(const std::string& profile_id) const {
  std::lock_guard g(mu_);
  auto it = instances_.find(profile_id);
  if (it == instances_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

}  // namespace govgw::manager
