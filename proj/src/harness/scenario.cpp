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
#include "govgw/harness/scenario.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <sstream>
#include <thread>

#include "govgw/common/error.hpp"
#include "govgw/common/json_util.hpp"
#include "govgw/gateway/pipeline.hpp"
#include "govgw/harness/mocks.hpp"
#include "govgw/profile/document.hpp"

namespace govgw::harness {

using nlohmann::json;

bool ScenarioReport::ok() const {
  for (const auto& a : assertions) {
    if (!a.pass) return false;
  }
  return !assertions.empty();
}

std::vector<std::string> ScenarioReport::failed() const {
  std::vector<std::string> out;
  for (const auto& a : assertions) {
    if (!a.pass) out.push_back(a.name + ": " + a.detail);
  }
  return out;
}

json ScenarioReport::to_json() const {
  json list = json::array();
  std::size_t passed = 0;
  for (const auto& a : assertions) {
    list.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
    passed += a.pass;
  }
  json per_route = json::object();
  for (const auto& [route, counts] : corpus) {
    per_route[route] = {{"sent", counts.first}, {"as_expected", counts.second}};
  }
  return {{"fixture", fixture},
          {"ok", ok()},
          {"passed", passed},
          {"failed", assertions.size() - passed},
          {"elapsed_seconds", elapsed_seconds},
          {"corpus", per_route},
          {"assertions", list}};
}

gateway::HttpReply send_message(const std::string& gateway_base, const CorpusMessage& message,
                                const std::optional<std::string>& secret) {
  gateway::Headers headers = message.headers;
  if (!message.subject.empty()) headers["X-Subject"] = message.subject;
  if (!message.action.empty()) headers["X-Action"] = message.action;
  if (!message.resource.empty()) headers["X-Resource"] = message.resource;
  if (secret) headers["X-VMS-Secret"] = *secret;
  return gateway::http_post(gateway_base + "/gw/" + message.route, message.body, headers,
                            "text/plain");
}

// ------------------------------------------------------- audit completeness

namespace {

struct AttemptKey {
  std::uint64_t message = 0;
  std::uint64_t version = 0;
  bool operator<(const AttemptKey& o) const {
    return std::tie(message, version) < std::tie(o.message, o.version);
  }
};

std::optional<AttemptKey> attempt_of(const std::string& detail) {
  unsigned long long msg = 0, ver = 0;
  int used = 0;
  if (std::sscanf(detail.c_str(), "msg=%llu v=%llu%n", &msg, &ver, &used) != 2) return std::nullopt;
  if (used < static_cast<int>(detail.size()) && detail[used] != ' ') return std::nullopt;
  return AttemptKey{msg, ver};
}

}  // namespace

AuditCompleteness check_audit_completeness(const std::vector<capability::AuditRecord>& records,
                                           const json& pipeline_history) {
  AuditCompleteness out;
  std::map<std::uint64_t, std::vector<std::string>> steps_of;
  for (const auto& d : pipeline_history) {
    auto& steps = steps_of[d.at("version").get<std::uint64_t>()];
    steps.clear();
    for (const auto& s : d.at("steps")) steps.push_back(s.at("instance_id"));
  }
  std::map<AttemptKey, std::vector<const capability::AuditRecord*>> attempts;
  for (const auto& r : records) {
    if (auto key = attempt_of(r.detail)) attempts[*key].push_back(&r);
  }
  auto problem = [&](const AttemptKey& k, const std::string& what) {
    out.ok = false;
    if (out.problems.size() < 20) {
      out.problems.push_back("msg " + std::to_string(k.message) + " v" +
                             std::to_string(k.version) + ": " + what);
    }
  };
  for (const auto& [key, recs] : attempts) {
    ++out.attempts;
    out.records += recs.size();
    auto steps = steps_of.find(key.version);
    if (steps == steps_of.end()) {
      problem(key, "no published pipeline with this version");
      continue;
    }
    const auto& last = *recs.back();
    if (last.instance_id != "gateway") {
      problem(key, "last record is not a gateway disposition");
      continue;
    }
    std::size_t executed = recs.size() - 1;
    if (executed == 0 || executed > steps->second.size()) {
      problem(key, std::to_string(executed) + " step records for " +
                       std::to_string(steps->second.size()) + " steps");
      continue;
    }
    bool in_order = true;
    for (std::size_t i = 0; i < executed; ++i) {
      in_order &= recs[i]->instance_id == steps->second[i];
    }
    if (!in_order) {
      problem(key, "step records out of pipeline order");
      continue;
    }
    const auto& final_step = *recs[executed - 1];
    if (last.action == "forward") {
      if (executed != steps->second.size()) problem(key, "forwarded before the last step");
    } else if (last.action == "reject") {
      if (final_step.outcome == "success") problem(key, "rejected after a successful step");
    } else if (last.action == "buffer") {
      if (final_step.detail.find("InstanceNotActive") == std::string::npos) {
        problem(key, "buffered without an inactive instance");
      }
    } else {
      problem(key, "unknown disposition " + last.action);
    }
  }
  return out;
}

// ----------------------------------------------------------------- scenario

namespace {

class ManagementClient {
 public:
  explicit ManagementClient(std::string base) : base_(std::move(base)) {}

  json call(const std::string& verb, const json& args) const {
    auto reply = gateway::http_post(base_ + "/mgmt/" + verb, args.dump(), {}, "application/json");
    json body = json::parse(reply.body, nullptr, false);
    if (reply.status != 200) {
      std::string code = body.is_object() ? body.value("error", "HttpError") : "HttpError";
      std::string detail = body.is_object() ? body.value("detail", reply.body) : reply.body;
      throw Error(Errc::kScenarioAssertionFailed, code + ": " + detail);
    }
    return body;
  }

 private:
  std::string base_;
};

std::vector<CorpusMessage> positives_of(const ScenarioFixture& f, const std::string& route) {
  std::vector<CorpusMessage> out;
  for (const auto& m : f.corpus) {
    if (m.route == route && m.expect_accept) out.push_back(m);
  }
  return out;
}

std::string steps_text(const json& steps) {
  if (steps.empty()) return "none";
  return std::to_string(steps.front().get<int>()) + "-" + std::to_string(steps.back().get<int>()) +
         " (" + std::to_string(steps.size()) + ")";
}

bool contiguous(const json& steps, int first, int last) {
  if (static_cast<int>(steps.size()) != last - first + 1) return false;
  for (int i = first; i <= last; ++i) {
    if (steps[i - first].get<int>() != i) return false;
  }
  return true;
}

}  // namespace

ScenarioReport run_scenario(const ScenarioFixture& fixture, const Config& config,
                            const std::function<void(Deployment&)>& inspect) {
  const auto started = std::chrono::steady_clock::now();
  ScenarioReport report;
  report.fixture = fixture.name;

  auto attempt = [&](const std::string& name, const std::function<std::string()>& body) {
    ScenarioAssertion a{name, false, ""};
    try {
      a.detail = body();
      a.pass = true;
    } catch (const Error& e) {
      a.detail = e.code() == Errc::kScenarioAssertionFailed
                     ? e.detail()
                     : std::string(to_string(e.code())) + ": " + e.detail();
    } catch (const std::exception& e) {
      a.detail = e.what();
    }
    report.assertions.push_back(std::move(a));
    return report.assertions.back().pass;
  };
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(Errc::kScenarioAssertionFailed, what);
  };

  MockProviders mocks(fixture.mock_providers);
  mocks.start(config.host, config.provider_ports);

  DeploymentOptions options;
  options.buffer_bound = config.buffer_bound;
  if (config.taxonomy_path) {
    options.taxonomy = profile::Taxonomy::from_json(json_util::parse_or_throw(
        json_util::read_file(*config.taxonomy_path), *config.taxonomy_path));
  }
  Deployment deployment(fixture, options);
  CommandDispatcher dispatcher(deployment, config);

  gateway::HttpServer gateway_server;
  gateway::mount_gateway(gateway_server, deployment.gateway(), config.vms_secret);
  std::unique_ptr<gateway::HttpServer> management_server;
  const bool shared = config.management_port == config.gateway_port;
  if (shared) {
    mount_management(gateway_server, dispatcher);
  } else {
    management_server = std::make_unique<gateway::HttpServer>();
    mount_management(*management_server, dispatcher);
  }
  const int gw_port = gateway_server.start(config.host, config.gateway_port);
  const int mgmt_port =
      shared ? gw_port : management_server->start(config.host, config.management_port);
  const std::string gw = "http://" + config.host + ":" + std::to_string(gw_port);
  const ManagementClient mgmt("http://" + config.host + ":" + std::to_string(mgmt_port));

  auto send = [&](const CorpusMessage& m) { return send_message(gw, m, config.vms_secret); };
  auto pipeline_of = [&](const std::string& id) {
    auto p = deployment.profiles().record(id, "pipeline");
    return p ? *p : json();
  };

  attempt("registry seeded", [&] {
    auto n = deployment.registry().all().size();
    require(n == fixture.registry_seed.size(), "registry holds " + std::to_string(n));
    return std::to_string(n) + " capability descriptors";
  });

  // Deposit and enact every profile.
  std::set<std::string> enacted;
  for (const auto& prof : fixture.profiles) {
    const std::string id = prof.profile_id;
    bool ok = attempt(id + " enacted", [&] {
      mgmt.call("deposit", {{"document", profile::deposit_json(prof)}});
      manager::EnactContext ctx;
      if (auto it = fixture.contexts.find(id); it != fixture.contexts.end()) ctx = it->second;
      if (fixture.provider(id)) ctx.forward_target = mocks.url(id);
      json out = mgmt.call("enact", {{"profile", id}, {"context", ctx.to_json()}});
      require(out.at("state") == "Enacted", "state " + out.at("state").get<std::string>());
      require(contiguous(out.at("steps"), 1, 39),
              "management steps " + steps_text(out.at("steps")));
      return "steps 1-39, pipeline " + out.at("pipeline").at("pipeline_id").get<std::string>();
    });
    if (ok) enacted.insert(id);
  }

  // The corpus.
  {
    int positives = 0, accepted = 0, negatives = 0, rejected = 0;
    std::vector<std::string> misses;
    for (const auto& m : fixture.corpus) {
      auto& counts = report.corpus[m.route];
      ++counts.first;
      int status = 0;
      std::string body;
      try {
        auto reply = send(m);
        status = reply.status;
        body = reply.body;
      } catch (const Error& e) {
        body = e.detail();
      }
      bool ok = (status == 200) == m.expect_accept;
      counts.second += ok;
      if (m.expect_accept) {
        ++positives;
        accepted += status == 200;
      } else {
        ++negatives;
        rejected += status != 200;
      }
      if (!ok && misses.size() < 5) {
        misses.push_back(m.route + " " + m.subject + " " + m.resource + " -> " +
                         std::to_string(status) + " " + body.substr(0, 120));
      }
    }
    auto summary = [&](int got, int of) { return std::to_string(got) + "/" + std::to_string(of); };
    std::string detail;
    for (const auto& x : misses) detail += "; " + x;
    attempt("corpus positives accepted", [&] {
      require(positives > 0 && accepted == positives, summary(accepted, positives) + detail);
      return summary(accepted, positives);
    });
    attempt("corpus negatives rejected", [&] {
      require(rejected == negatives, summary(rejected, negatives) + detail);
      return summary(rejected, negatives);
    });
  }

  // Reconfiguration, then an invalid change that must be rejected.
  if (const auto& r = fixture.adaptations.reconfigure) {
    const std::string id = r->profile_id;
    attempt(std::string(manager::to_string(r->kind)) + " reconfiguration of " + id, [&] {
      require(enacted.count(id) > 0, id + " was never enacted");
      auto before = pipeline_of(id).at("version").get<std::uint64_t>();
      json out = mgmt.call("adapt", {{"profile", id},
                                     {"kind", manager::to_string(r->kind)},
                                     {"payload", r->payload}});
      require(out.at("state") == "Enacted", "state " + out.at("state").get<std::string>());
      require(contiguous(out.at("steps"), 13, 39), "steps " + steps_text(out.at("steps")));
      auto after = out.at("pipeline").at("version").get<std::uint64_t>();
      require(after > before, "pipeline version did not advance");
      auto positives = positives_of(fixture, id);
      for (std::size_t i = 0; i < std::min<std::size_t>(2, positives.size()); ++i) {
        auto reply = send(positives[i]);
        require(reply.status == 200, "message after change answered " + std::to_string(reply.status));
      }
      std::string detail = "v" + std::to_string(before) + " -> v" + std::to_string(after);
      if (r->payload.value("parameter", "") == "hash_alg" &&
          r->payload.value("value", "") == "sha-512") {
        auto records = deployment.gateway().query_audit(id);
        auto check = capability::verify_chain(records);
        require(check.ok, "chain broken at " + std::to_string(check.bad_seq.value_or(0)));
        std::size_t switch_at = records.size();
        for (std::size_t i = 0; i < records.size(); ++i) {
          if (records[i].chain.size() == 128) {
            switch_at = i;
            break;
          }
        }
        require(switch_at > 0 && switch_at < records.size(), "no algorithm switch in the chain");
        for (std::size_t i = switch_at; i < records.size(); ++i) {
          require(records[i].chain.size() == 128, "sha-256 record after the switch");
        }
        detail += ", chain sha-256 x" + std::to_string(switch_at) + " then sha-512 x" +
                  std::to_string(records.size() - switch_at) + ", verifies";
      }
      return detail;
    });
    attempt("unsupported grammar change rejected for " + id, [&] {
      require(enacted.count(id) > 0, id + " was never enacted");
      auto prof = deployment.profiles().get(id);
      std::optional<std::size_t> index;
      for (std::size_t i = 0; i < prof.requirements.size() && !index; ++i) {
        if (prof.requirements[i].policy_template_ref) index = i;
      }
      require(index.has_value(), id + " has no policy-bearing requirement");
      auto before = pipeline_of(id).at("version").get<std::uint64_t>();
      try {
        mgmt.call("adapt", {{"profile", id},
                            {"kind", "S6"},
                            {"payload",
                             {{"requirement", *index},
                              {"grammar", "xacml"},
                              {"body", "<Policy/>"}}}});
      } catch (const Error& e) {
        require(e.detail().rfind("ChangeRejected", 0) == 0, "wrong error " + e.detail());
        auto now = deployment.profiles().get(id);
        require(now.state == profile::LifecycleState::kEnacted, "profile left Enacted");
        require(pipeline_of(id).at("version").get<std::uint64_t>() == before,
                "pipeline version changed");
        return "rejected, still Enacted on v" + std::to_string(before);
      }
      throw Error(Errc::kScenarioAssertionFailed, "change was accepted");
    });
  }

  // Extension with a new requirement.
  if (const auto& r = fixture.adaptations.extend) {
    const std::string id = r->profile_id;
    attempt(std::string(manager::to_string(r->kind)) + " extension of " + id, [&] {
      require(enacted.count(id) > 0, id + " was never enacted");
      auto before = pipeline_of(id).at("steps").size();
      json out = mgmt.call("adapt", {{"profile", id},
                                     {"kind", manager::to_string(r->kind)},
                                     {"payload", r->payload}});
      require(out.at("state") == "Enacted", "state " + out.at("state").get<std::string>());
      auto after = out.at("pipeline").at("steps").size();
      require(after == before + 1, "pipeline has " + std::to_string(after) + " steps");
      for (const auto& m : positives_of(fixture, id)) {
        auto reply = send(m);
        require(reply.status == 200, "message after extension answered " +
                                         std::to_string(reply.status));
        break;
      }
      return std::to_string(before) + " -> " + std::to_string(after) + " steps, steps " +
             steps_text(out.at("steps"));
    });
  }

  // Capability failure under load.
  if (!fixture.adaptations.failure_profile.empty()) {
    const std::string id = fixture.adaptations.failure_profile;
    const std::string cap = fixture.adaptations.failure_capability;
    attempt("failure of " + cap + " loses no " + id + " message", [&] {
      require(enacted.count(id) > 0, id + " was never enacted");
      auto positives = positives_of(fixture, id);
      require(!positives.empty(), "no positive messages for " + id);
      const int n = std::max(3, fixture.adaptations.failure_messages);
      const auto trail_before = deployment.gateway().query_audit(id).size();
      std::atomic<int> sent{0};
      std::vector<int> statuses(n, 0);
      std::vector<std::uint64_t> ids(n, 0);
      std::thread client([&] {
        for (int i = 0; i < n; ++i) {
          try {
            auto reply = send(positives[i % positives.size()]);
            statuses[i] = reply.status;
            auto it = reply.headers.find("X-Govgw-Message-Id");
            if (it != reply.headers.end()) ids[i] = std::stoull(it->second);
          } catch (const std::exception&) {
            statuses[i] = -1;
          }
          sent.fetch_add(1);
        }
      });
      while (sent.load() < n / 3) std::this_thread::sleep_for(std::chrono::milliseconds(1));
      deployment.registry().set_availability(cap, registry::Availability::kUnavailable);
      client.join();
      deployment.registry().flush_events();
      deployment.manager().run_pending_recoveries();

      int ok = 0;
      for (int s : statuses) ok += s == 200;
      require(ok == n, std::to_string(ok) + "/" + std::to_string(n) + " delivered");
      std::vector<std::uint64_t> delivered;
      for (const auto& d : mocks.deliveries()) {
        if (d.provider == id && d.message_id >= ids.front() && d.message_id <= ids.back()) {
          delivered.push_back(d.message_id);
        }
      }
      require(delivered.size() == static_cast<std::size_t>(n),
              std::to_string(delivered.size()) + " deliveries at the provider");
      require(std::is_sorted(delivered.begin(), delivered.end()), "delivered out of ingress order");
      auto records = deployment.gateway().query_audit(id, trail_before + 1);
      bool began = false, ended = false;
      for (const auto& rec : records) {
        began |= rec.action == "recovery" && rec.outcome == "begin";
        ended |= rec.action == "recovery" && rec.outcome == "end";
      }
      require(began && ended, "recovery window missing from the audit trail");
      for (const auto& s : pipeline_of(id).at("steps")) {
        require(s.at("capability_id") != cap, "pipeline still uses " + cap);
      }
      std::set<std::string> expected;
      for (const auto& pid : deployment.profiles().ids()) {
        auto live = deployment.manager().live_instances(pid);
        expected.insert(live.begin(), live.end());
      }
      require(deployment.manager().pool().live() == expected, "capability instances leaked");
      return std::to_string(n) + " messages delivered in order, recovery audited, " +
             std::to_string(expected.size()) + " live instances";
    });
  }

  // Restore each profile from its Instantiable snapshot and re-enact.
  for (const auto& id : fixture.adaptations.restore) {
    attempt("restore " + id + " at Instantiable", [&] {
      require(enacted.count(id) > 0, id + " was never enacted");
      json before = gateway::normalized_descriptor(pipeline_of(id));
      json list = mgmt.call("snapshot", {{"profile", id}}).at("snapshots");
      std::string snap;
      for (const auto& s : list) {
        if (s.at("state") == "Instantiable") snap = s.at("snapshot_id");
      }
      require(!snap.empty(), "no Instantiable snapshot");
      mgmt.call("restore", {{"snapshot", snap}});
      json out = mgmt.call("enact", {{"profile", id}});
      require(contiguous(out.at("steps"), 21, 39), "steps " + steps_text(out.at("steps")));
      json after = gateway::normalized_descriptor(out.at("pipeline"));
      require(before.dump() == after.dump(), "descriptor differs after restore");
      for (const auto& m : positives_of(fixture, id)) {
        auto reply = send(m);
        require(reply.status == 200, "message after restore answered " +
                                         std::to_string(reply.status));
        break;
      }
      return snap + ", steps 21-39, identical descriptor";
    });
  }

  attempt("audit complete and verifiable", [&] {
    std::size_t attempts = 0, records = 0;
    for (const auto& id : deployment.profiles().ids()) {
      auto trail = deployment.gateway().query_audit(id);
      auto chain = capability::verify_chain(trail);
      require(chain.ok, id + " chain broken at " + std::to_string(chain.bad_seq.value_or(0)));
      auto history = deployment.profiles().record(id, "pipeline_history");
      auto check = check_audit_completeness(trail, history.value_or(json::array()));
      std::string problems;
      for (const auto& p : check.problems) problems += "; " + p;
      require(check.ok, id + problems);
      attempts += check.attempts;
      records += trail.size();
    }
    return std::to_string(attempts) + " message attempts, " + std::to_string(records) +
           " records verified";
  });

  if (inspect) inspect(deployment);
  gateway_server.stop();
  if (management_server) management_server->stop();
  mocks.stop();
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace govgw::harness
