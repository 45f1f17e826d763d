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
#ifndef GOVGW_HARNESS_DEPLOYMENT_HPP_
#define GOVGW_HARNESS_DEPLOYMENT_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "govgw/capability/audit.hpp"
#include "govgw/gateway/gateway.hpp"
#include "govgw/gateway/http.hpp"
#include "govgw/harness/fixture.hpp"
#include "govgw/manager/manager.hpp"
#include "govgw/profile/profile_store.hpp"
#include "govgw/profile/snapshot_store.hpp"
#include "govgw/registry/registry.hpp"

namespace govgw::harness {

// Tool configuration, read from a JSON file. Every field is optional.
struct Config {
  std::string host = "127.0.0.1";
  int gateway_port = 0;     // 0 picks a free port
  int management_port = 0;  // shares the gateway server when equal
  std::map<std::string, int> provider_ports;
  std::size_t buffer_bound = gateway::kDefaultBufferBound;
  std::optional<std::string> taxonomy_path;
  std::string fixture_dir = default_fixture_dir();
  std::string state_dir = ".govgw";
  std::optional<std::string> vms_secret;

  // Throws kMalformedDocument or kUnknownField.
  static Config from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Reads the file named by flag_path, else by GOVGW_CONFIG, else returns the
// defaults.
Config load_config(const std::optional<std::string>& flag_path);

struct DeploymentOptions {
  std::optional<std::string> state_dir;  // in memory when unset
  std::size_t buffer_bound = gateway::kDefaultBufferBound;
  manager::RecoveryMode recovery = manager::RecoveryMode::kInline;
  std::shared_ptr<gateway::Forwarder> forwarder;  // HTTP when unset
  std::optional<std::vector<registry::CapabilityDescriptor>> seed;
  std::optional<profile::Taxonomy> taxonomy;
};

// One middleware instance: registry, stores, gateway and profile manager.
class Deployment {
 public:
  Deployment(const ScenarioFixture& fixture, DeploymentOptions options = {});
  ~Deployment();

  Deployment(const Deployment&) = delete;
  Deployment& operator=(const Deployment&) = delete;

  const ScenarioFixture& fixture() const { return fixture_; }
  registry::Registry& registry() { return *registry_; }
  profile::ProfileStore& profiles() { return *profiles_; }
  profile::SnapshotStore& snapshots() { return *snapshots_; }
  capability::AuditStore& audits() { return *audits_; }
  gateway::Gateway& gateway() { return *gateway_; }
  manager::ProfileManager& manager() { return *manager_; }

  // Context for enacting a profile: the stored one, else the fixture's.
  manager::EnactContext context_for(const std::string& profile_id) const;

 private:
  ScenarioFixture fixture_;
  std::shared_ptr<registry::Registry> registry_;
  std::shared_ptr<profile::ProfileStore> profiles_;
  std::shared_ptr<profile::SnapshotStore> snapshots_;
  std::shared_ptr<capability::AuditStore> audits_;
  std::shared_ptr<gateway::Gateway> gateway_;
  std::unique_ptr<manager::ProfileManager> manager_;
};

// The verbs shared by the command-line tool and the management API:
// deposit, validate, instantiate, enact, adapt, snapshot, restore, status,
// audit, run-scenario. Arguments and results are JSON objects; failures
// throw govgw::Error.
class CommandDispatcher {
 public:
  CommandDispatcher(Deployment& deployment, Config config);

  nlohmann::json execute(const std::string& verb, const nlohmann::json& args);
  static const std::vector<std::string>& verbs();

 private:
  Deployment& deployment_;
  Config config_;
};

// Wires "POST /mgmt/<verb>" to the dispatcher. The request body is the
// argument object; errors answer 400 (rejected input) or 500 with
// {"error", "detail"}.
void mount_management(gateway::HttpServer& server, CommandDispatcher& dispatcher);

// 1 for rejected input, 2 for operational failures.
int exit_code_for(Errc code);

}  // namespace govgw::harness

#endif  // GOVGW_HARNESS_DEPLOYMENT_HPP_
