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
// govgw: command-line entry to the security governance middleware.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "govgw/common/error.hpp"
#include "govgw/common/json_util.hpp"
#include "govgw/harness/deployment.hpp"
#include "govgw/harness/fixture.hpp"
#include "govgw/harness/scenario.hpp"

namespace {

using nlohmann::json;
namespace ju = govgw::json_util;

int fail(govgw::Errc code, const std::string& detail, json extra = json::object()) {
  json out = {{"error", govgw::to_string(code)}, {"detail", detail}};
  out.update(extra);
  std::cout << out.dump(2) << "\n";
  return govgw::harness::exit_code_for(code);
}

json read_json_file(const std::string& path) {
  return ju::parse_or_throw(ju::read_file(path), path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Security governance middleware"};
  std::string command;
  std::optional<std::string> file, profile, kind, snapshot, registry, config_path, requirement,
      fixture;
  std::optional<std::uint64_t> from, to;
  app.add_option("command", command, "deposit | validate | instantiate | enact | adapt | "
                                     "snapshot | restore | status | audit | run-scenario")
      ->required()
      ->check(CLI::IsMember(govgw::harness::CommandDispatcher::verbs()));
  app.add_option("--file", file, "profile, context or adaptation payload document");
  app.add_option("--profile", profile, "profile id");
  app.add_option("--kind", kind, "adaptation kind S1..S6");
  app.add_option("--snapshot", snapshot, "snapshot id");
  app.add_option("--registry", registry, "registry seed file");
  app.add_option("--config", config_path, "configuration file (overrides GOVGW_CONFIG)");
  app.add_option("--requirement", requirement, "requirement document for S2");
  app.add_option("--fixture", fixture, "scenario fixture directory");
  app.add_option("--from", from, "first audit sequence number");
  app.add_option("--to", to, "last audit sequence number");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(govgw::Errc::kInvalidArgument, e.what());
  }

  try {
    auto config = govgw::harness::load_config(config_path);
    if (command == "run-scenario") {
      auto f = govgw::harness::load_fixture(fixture.value_or(config.fixture_dir));
      auto report = govgw::harness::run_scenario(f, config);
      if (!report.ok()) {
        return fail(govgw::Errc::kScenarioAssertionFailed, "scenario assertions failed",
                    {{"failed", report.failed()}, {"report", report.to_json()}});
      }
      std::cout << report.to_json().dump(2) << "\n";
      return 0;
    }

    json args = json::object();
    if (profile) args["profile"] = *profile;
    if (kind) args["kind"] = *kind;
    if (snapshot) args["snapshot"] = *snapshot;
    if (from) args["from"] = *from;
    if (to) args["to"] = *to;
    if (command == "deposit") {
      if (!file) return fail(govgw::Errc::kInvalidArgument, "deposit needs --file");
      args["document"] = ju::read_file(*file);
    } else if (command == "enact" && file) {
      args["context"] = read_json_file(*file);
    } else if (command == "adapt") {
      json payload = file ? read_json_file(*file) : json::object();
      if (requirement) payload["requirement"] = read_json_file(*requirement);
      args["payload"] = payload;
    }

    govgw::harness::DeploymentOptions options;
    options.state_dir = config.state_dir;
    options.buffer_bound = config.buffer_bound;
    if (registry) options.seed = govgw::registry::load_seed(*registry);
    if (config.taxonomy_path) {
      options.taxonomy = govgw::profile::Taxonomy::from_json(read_json_file(*config.taxonomy_path));
    }
    auto f = govgw::harness::load_fixture(config.fixture_dir);
    govgw::harness::Deployment deployment(f, options);
    govgw::harness::CommandDispatcher dispatcher(deployment, config);
    std::cout << dispatcher.execute(command, args).dump(2) << "\n";
    return 0;
  } catch (const govgw::Error& e) {
    return fail(e.code(), e.detail());
  } catch (const std::exception& e) {
    return fail(govgw::Errc::kIoError, e.what());
  }
}
