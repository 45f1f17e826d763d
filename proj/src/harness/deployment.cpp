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
#include "govgw/harness/deployment.hpp"

#include <cstdlib>
#include <filesystem>

#include "govgw/common/error.hpp"
#include "govgw/common/json_util.hpp"
#include "govgw/gateway/forwarder.hpp"
#include "govgw/harness/scenario.hpp"
#include "govgw/profile/document.hpp"

namespace govgw::harness {

namespace ju = json_util;
using nlohmann::json;
using profile::LifecycleState;

// ------------------------------------------------------------------- config

Config Config::from_json(const json& j) {
  constexpr std::string_view where = "config";
  ju::require_object(j, where);
  ju::reject_unknown_fields(j,
                            {"host", "gateway_port", "management_port", "provider_ports",
                             "buffer_bound", "taxonomy", "fixture_dir", "state_dir", "vms_secret"},
                            where);
  Config c;
  try {
    c.host = j.value("host", c.host);
    c.gateway_port = j.value("gateway_port", c.gateway_port);
    c.management_port = j.value("management_port", c.management_port);
    if (j.contains("provider_ports")) {
      c.provider_ports = j.at("provider_ports").get<std::map<std::string, int>>();
    }
    c.buffer_bound = j.value("buffer_bound", c.buffer_bound);
    if (j.contains("taxonomy")) c.taxonomy_path = j.at("taxonomy").get<std::string>();
    c.fixture_dir = j.value("fixture_dir", c.fixture_dir);
    c.state_dir = j.value("state_dir", c.state_dir);
    if (j.contains("vms_secret")) c.vms_secret = j.at("vms_secret").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(Errc::kMalformedDocument, std::string("config: ") + e.what());
  }
  if (c.buffer_bound == 0) throw Error(Errc::kMalformedDocument, "config: buffer_bound must be > 0");
  return c;
}

json Config::to_json() const {
  json j = {{"host", host},
            {"gateway_port", gateway_port},
            {"management_port", management_port},
            {"provider_ports", provider_ports},
            {"buffer_bound", buffer_bound},
            {"fixture_dir", fixture_dir},
            {"state_dir", state_dir}};
  if (taxonomy_path) j["taxonomy"] = *taxonomy_path;
  if (vms_secret) j["vms_secret"] = *vms_secret;
  return j;
}

Config load_config(const std::optional<std::string>& flag_path) {
  std::optional<std::string> path = flag_path;
  if (!path) {
    if (const char* env = std::getenv("GOVGW_CONFIG"); env && *env) path = env;
  }
  if (!path) return Config{};
  Config c = Config::from_json(ju::parse_or_throw(ju::read_file(*path), *path));
  // Relative paths in the file are taken from the file's directory.
  auto base = std::filesystem::path(*path).parent_path();
  auto rebase = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).string();
  };
  rebase(c.fixture_dir);
  rebase(c.state_dir);
  if (c.taxonomy_path) rebase(*c.taxonomy_path);
  return c;
}

// --------------------------------------------------------------- deployment

Deployment::Deployment(const ScenarioFixture& fixture, DeploymentOptions options)
    : fixture_(fixture) {
  registry_ = std::make_shared<registry::Registry>(options.taxonomy ? *options.taxonomy
                                                                    : fixture.taxonomy);
  for (const auto& d : options.seed ? *options.seed : fixture.registry_seed) {
    registry_->register_capability(d);
  }
  std::optional<std::string> profiles_dir, snapshots_dir, audit_dir;
  if (options.state_dir) {
    auto root = std::filesystem::path(*options.state_dir);
    profiles_dir = (root / "profiles").string();
    snapshots_dir = (root / "snapshots").string();
    audit_dir = (root / "audit").string();
  }
  profiles_ = std::make_shared<profile::ProfileStore>(profiles_dir);
  snapshots_ = std::make_shared<profile::SnapshotStore>(snapshots_dir);
  audits_ = std::make_shared<capability::AuditStore>(audit_dir);
  auto forwarder = options.forwarder ? options.forwarder
                                     : std::make_shared<gateway::HttpForwarder>();
  gateway_ = std::make_shared<gateway::Gateway>(audits_, forwarder, options.buffer_bound);
  manager_ = std::make_unique<manager::ProfileManager>(registry_, profiles_, snapshots_, gateway_,
                                                       fixture.template_library(),
                                                       options.recovery);
}

Deployment::~Deployment() { manager_.reset(); }

manager::EnactContext Deployment::context_for(const std::string& profile_id) const {
  if (auto stored = profiles_->record(profile_id, "enact_context")) {
    return manager::EnactContext::from_json(*stored);
  }
  auto it = fixture_.contexts.find(profile_id);
  return it == fixture_.contexts.end() ? manager::EnactContext{} : it->second;
}

// ----------------------------------------------------------------- commands

namespace {

std::string need(const json& args, const char* field) {
  if (!args.is_object() || !args.contains(field) || !args.at(field).is_string()) {
    throw Error(Errc::kInvalidArgument, std::string("missing argument '") + field + "'");
  }
  return args.at(field).get<std::string>();
}

json pipeline_or_null(Deployment& d, const std::string& id) {
  auto p = d.profiles().record(id, "pipeline");
  return p ? *p : json();
}

json process_steps(Deployment& d, const std::string& id) {
  auto p = d.manager().last_process(id);
  return p ? json(p->step_numbers()) : json::array();
}

json snapshot_json(const profile::Snapshot& s) {
  return {{"snapshot_id", s.snapshot_id()},
          {"profile_id", s.profile_id()},
          {"state", profile::to_string(s.state())},
          {"created_at", format_iso8601(s.created_at())}};
}

json status_of(Deployment& d, const std::string& id) {
  auto prof = d.profiles().get(id);
  json out = {{"profile_id", id},
              {"state", profile::to_string(prof.state)},
              {"failure", prof.failure ? json{{"stage", profile::to_string(prof.failure->stage)},
                                              {"reason", prof.failure->reason}}
                                       : json()},
              {"pipeline", pipeline_or_null(d, id)},
              {"endpoint", json()}};
  if (d.gateway().has_endpoint(id)) {
    auto s = d.gateway().status(id);
    out["endpoint"] = {{"route", s.route},
                       {"mode", gateway::to_string(s.mode)},
                       {"version", s.version},
                       {"queued", s.queued}};
  }
  if (auto process = d.profiles().record(id, "management_process")) {
    out["management_process"] = *process;
  }
  return out;
}

}  // namespace

CommandDispatcher::CommandDispatcher(Deployment& deployment, Config config)
    : deployment_(deployment), config_(std::move(config)) {}

const std::vector<std::string>& CommandDispatcher::verbs() {
  static const std::vector<std::string> v = {"deposit", "validate", "instantiate", "enact",
                                             "adapt",   "snapshot", "restore",     "status",
                                             "audit",   "run-scenario"};
  return v;
}

json CommandDispatcher::execute(const std::string& verb, const json& args) {
  auto& m = deployment_.manager();
  if (!args.is_null() && !args.is_object()) {
    throw Error(Errc::kInvalidArgument, "arguments must be a JSON object");
  }
  if (verb == "deposit") {
    if (!args.contains("document")) throw Error(Errc::kInvalidArgument, "missing 'document'");
    const json& doc = args.at("document");
    auto prof = m.deposit(profile::parse_profile(doc.is_string() ? doc.get<std::string>()
                                                                 : doc.dump()));
    return {{"profile_id", prof.profile_id}, {"state", profile::to_string(prof.state)}};
  }
  if (verb == "validate") {
    std::string id = need(args, "profile");
    auto prof = m.run_consistency_stages(id);
    json missing = json::array();
    for (const auto& v : m.check_missing_components(id).violations) missing.push_back(v.detail);
    return {{"profile_id", id},
            {"state", profile::to_string(prof.state)},
            {"missing_components", missing},
            {"steps", process_steps(deployment_, id)}};
  }
  if (verb == "instantiate") {
    std::string id = need(args, "profile");
    auto state = deployment_.profiles().get(id).state;
    if (state == LifecycleState::kDeposited || state == LifecycleState::kFailed) {
      m.run_consistency_stages(id);
    }
    auto prof = m.build_instantiable(id);
    auto snap = deployment_.snapshots().latest(id, LifecycleState::kInstantiable);
    return {{"profile_id", id},
            {"state", profile::to_string(prof.state)},
            {"snapshot_id", snap ? json(snap->snapshot_id()) : json()}};
  }
  if (verb == "enact") {
    std::string id = need(args, "profile");
    manager::EnactContext ctx = args.contains("context")
                                    ? manager::EnactContext::from_json(args.at("context"))
                                    : deployment_.context_for(id);
    auto prof = deployment_.profiles().get(id);
    std::shared_ptr<const gateway::EnactedPipeline> p;
    if (prof.state == LifecycleState::kDeposited || prof.state == LifecycleState::kFailed) {
      p = m.run_full(id, ctx);
    } else {
      if (prof.state == LifecycleState::kBindingsValidated) m.build_instantiable(id);
      p = m.enact(id, ctx);
    }
    return {{"profile_id", id},
            {"state", profile::to_string(deployment_.profiles().get(id).state)},
            {"pipeline", p->descriptor()},
            {"steps", process_steps(deployment_, id)}};
  }
  if (verb == "adapt") {
    manager::AdaptationRequest r;
    r.profile_id = need(args, "profile");
    r.kind = manager::adaptation_from_string(need(args, "kind"));
    r.payload = args.value("payload", json::object());
    auto prof = m.adapt(r);
    return {{"profile_id", r.profile_id},
            {"kind", manager::to_string(r.kind)},
            {"state", profile::to_string(prof.state)},
            {"pipeline", pipeline_or_null(deployment_, r.profile_id)},
            {"steps", process_steps(deployment_, r.profile_id)}};
  }
  if (verb == "snapshot") {
    if (args.contains("snapshot")) {
      auto s = deployment_.snapshots().get(need(args, "snapshot"));
      if (!s) throw Error(Errc::kUnknownSnapshot, "no snapshot '" + need(args, "snapshot") + "'");
      json out = snapshot_json(*s);
      out["document"] = profile::document_json(s->document());
      return out;
    }
    std::string id = need(args, "profile");
    deployment_.profiles().get(id);
    json list = json::array();
    for (const auto& s : deployment_.snapshots().list(id)) list.push_back(snapshot_json(*s));
    return {{"profile_id", id}, {"snapshots", list}};
  }
  if (verb == "restore") {
    std::string snap = need(args, "snapshot");
    auto prof = m.restore(snap);
    return {{"profile_id", prof.profile_id},
            {"state", profile::to_string(prof.state)},
            {"snapshot_id", snap}};
  }
  if (verb == "status") {
    if (args.contains("profile")) return status_of(deployment_, need(args, "profile"));
    json all = json::array();
    for (const auto& id : deployment_.profiles().ids()) all.push_back(status_of(deployment_, id));
    return {{"profiles", all}};
  }
  if (verb == "audit") {
    std::string id = need(args, "profile");
    std::uint64_t from = args.value("from", std::uint64_t{1});
    std::uint64_t to = args.value("to", UINT64_MAX);
    auto records = deployment_.gateway().query_audit(id, from, to);
    std::string previous = capability::kGenesisChain;
    if (from > 1) {
      auto before = deployment_.gateway().query_audit(id, from - 1, from - 1);
      if (!before.empty()) previous = before.front().chain;
    }
    auto check = capability::verify_chain(records, previous, from);
    json list = json::array();
    for (const auto& r : records) list.push_back(capability::record_json(r));
    return {{"profile_id", id},
            {"count", records.size()},
            {"records", list},
            {"verification",
             {{"ok", check.ok},
              {"bad_seq", check.bad_seq ? json(*check.bad_seq) : json()},
              {"reason", check.reason}}}};
  }
  if (verb == "run-scenario") {
    std::string dir = args.value("fixture", config_.fixture_dir);
    auto report = run_scenario(load_fixture(dir), config_);
    json out = report.to_json();
    if (!report.ok()) {
      std::string detail;
      for (const auto& name : report.failed()) detail += (detail.empty() ? "" : "; ") + name;
      throw Error(Errc::kScenarioAssertionFailed, detail);
    }
    return out;
  }
  throw Error(Errc::kInvalidArgument, "unknown command '" + verb + "'");
}

void mount_management(gateway::HttpServer& server, CommandDispatcher& dispatcher) {
  server.post(R"(/mgmt/([a-z-]+))", [&dispatcher](const gateway::HttpRequest& req) {
    gateway::HttpReply out;
    try {
      json args = req.body.empty() ? json::object() : ju::parse_or_throw(req.body, "request");
      out.body = dispatcher.execute(req.captures.at(0), args).dump();
    } catch (const Error& e) {
      out.status = is_validation_error(e.code()) ? 400 : 500;
      if (e.code() == Errc::kUnknownProfile || e.code() == Errc::kUnknownSnapshot) out.status = 404;
      out.body = json{{"error", to_string(e.code())}, {"detail", e.detail()}}.dump();
    }
    return out;
  });
}

int exit_code_for(Errc code) { return is_validation_error(code) ? 1 : 2; }

}  // namespace govgw::harness
