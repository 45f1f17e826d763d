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
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "govgw/capability/codec.hpp"
#include "govgw/capability/xml_token.hpp"
#include "govgw/harness/scenario.hpp"
#include "govgw/profile/document.hpp"
#include "rig.hpp"

using namespace govgw;
using namespace govgw::harness;
using rig::code_of;

TEST_CASE("the shipped fixture loads") {
  const auto& f = rig::fixture();
  CHECK(f.profiles.size() == 3);
  CHECK(f.corpus.size() == 30);
  CHECK(f.provider("cp1") != nullptr);
  CHECK(f.provider("cp9") == nullptr);
  CHECK(code_of([] { load_fixture("/nonexistent/fixture"); }) == Errc::kIoError);
}

TEST_CASE("mock provider checks") {
  gateway::Headers h{{"Authorization", "Basic " + capability::base64_encode("vms:pw1")}};
  CHECK(check_basic(h, {{"vms", "pw1"}}).accepted);
  CHECK_FALSE(check_basic(h, {{"vms", "other"}}).accepted);
  CHECK_FALSE(check_basic({}, {{"vms", "pw1"}}).accepted);
  CHECK(check_proof({{"X-Proof-Id", "proof-0123456789abcdef"}}).accepted);
  CHECK_FALSE(check_proof({}).accepted);

  auto now = parse_iso8601("2026-01-01T00:10:00Z");
  auto token = [](const std::string& issued) {
    return capability::render_token({"vms3", "pw3", issued}) + "<order/>";
  };
  CHECK(check_xml_token(token("2026-01-01T00:06:00Z"), {{"vms3", "pw3"}}, 300, now).accepted);
  CHECK_FALSE(check_xml_token(token("2026-01-01T00:04:00Z"), {{"vms3", "pw3"}}, 300, now).accepted);
  CHECK_FALSE(check_xml_token(token("2026-01-01T00:11:00Z"), {{"vms3", "pw3"}}, 300, now).accepted);
  CHECK_FALSE(check_xml_token("<order/>", {{"vms3", "pw3"}}, 300, now).accepted);
}

TEST_CASE("dispatcher errors map to exit codes") {
  rig::Rig r;
  CommandDispatcher cmd(*r.d, Config{});
  CHECK(code_of([&] { cmd.execute("status", {{"profile", "nope"}}); }) == Errc::kUnknownProfile);
  CHECK(exit_code_for(Errc::kUnknownProfile) == 2);
  CHECK(code_of([&] { cmd.execute("restore", {{"snapshot", "nope"}}); }) == Errc::kUnknownSnapshot);
  CHECK(code_of([&] { cmd.execute("deposit", {{"document", "{"}}); }) == Errc::kMalformedDocument);
  CHECK(exit_code_for(Errc::kMalformedDocument) == 1);
  CHECK(exit_code_for(Errc::kChangeRejected) == 1);
  CHECK(exit_code_for(Errc::kEndpointUnavailable) == 2);
  CHECK(code_of([&] { cmd.execute("launch", {}); }) == Errc::kInvalidArgument);
}

TEST_CASE("dispatcher runs the lifecycle verb by verb") {
  rig::Rig r;
  CommandDispatcher cmd(*r.d, Config{});
  auto doc = profile::deposit_json(rig::fixture().profiles.front());
  auto out = cmd.execute("deposit", {{"document", doc}});
  CHECK(out["state"] == "Deposited");
  CHECK(cmd.execute("validate", {{"profile", "cp1"}})["state"] == "BindingsValidated");
  CHECK(cmd.execute("instantiate", {{"profile", "cp1"}})["state"] == "Instantiable");
  CHECK(cmd.execute("enact", {{"profile", "cp1"}})["state"] == "Enacted");
  CHECK(code_of([&] { cmd.execute("enact", {{"profile", "cp1"}}); }) == Errc::kAlreadyEnacted);
  auto audit = cmd.execute("audit", {{"profile", "cp1"}});
  CHECK(audit["verification"]["ok"] == true);
}

TEST_CASE("config flag wins over the environment and paths rebase") {
  auto dir = std::filesystem::temp_directory_path() / "govgw-config-test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "env.json") << R"({"gateway_port": 1111})";
    std::ofstream(dir / "flag.json") << R"({"gateway_port": 2222, "state_dir": "st"})";
    std::ofstream(dir / "bad.json") << R"({"colour": "red"})";
  }
  setenv("GOVGW_CONFIG", (dir / "env.json").c_str(), 1);
  CHECK(load_config(std::nullopt).gateway_port == 1111);
  Config c = load_config((dir / "flag.json").string());
  CHECK(c.gateway_port == 2222);
  CHECK(c.state_dir == (dir / "st").string());
  CHECK(code_of([&] { load_config((dir / "bad.json").string()); }) == Errc::kUnknownField);
  unsetenv("GOVGW_CONFIG");
  CHECK(load_config(std::nullopt).state_dir == ".govgw");
  CHECK(Config::from_json(c.to_json()).to_json() == c.to_json());
  std::filesystem::remove_all(dir);
}
