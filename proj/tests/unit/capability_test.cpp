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
#include <chrono>
#include <functional>
#include <random>
#include <string>

#include <doctest.h>

#include "closure_oracle.hpp"
#include "govgw/capability/codec.hpp"
#include "govgw/capability/services.hpp"
#include "govgw/capability/xml_token.hpp"
#include "govgw/common/error.hpp"
#include "govgw/common/time.hpp"

using namespace govgw;
using namespace govgw::capability;
using govgw::policy::ConcretePolicy;

namespace {

registry::CapabilityDescriptor descriptor(const std::string& id, const std::string& category,
                                          const std::string& mechanism,
                                          std::set<std::string> grammars = {}) {
  registry::CapabilityDescriptor d;
  d.capability_id = id;
  d.provider = "test";
  d.category = category;
  d.mechanism = mechanism;
  d.supported_grammars = std::move(grammars);
  d.invocation_patterns = {registry::InvocationPattern::kRequestResponse};
  return d;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::kIoError;
}

std::shared_ptr<CapabilityInstance> basic() {
  return make_instance("i-basic", descriptor("basic", "identity-management", "http-basic"), {});
}

std::shared_ptr<CapabilityInstance> sts() {
  return make_instance("i-sts", descriptor("xml-sts", "identity-management", "xml-token"), {});
}

std::shared_ptr<CapabilityInstance> pdp() {
  return make_instance("i-pdp", descriptor("a-pdp", "access-control", "secpal-pdp", {"secpal"}), {});
}

std::shared_ptr<CapabilityInstance> secpal_sts() {
  return make_instance("i-ssts", descriptor("sts-secpal", "identity-management", "token-secpal",
                                            {"secpal"}),
                       {});
}

std::shared_ptr<CapabilityInstance> audit(std::shared_ptr<AuditTrail> trail) {
  return make_instance("i-audit", descriptor("audit", "audit", "audit-log"), {trail});
}

ConcretePolicy secpal(std::string body) { return {"secpal", std::move(body), "t"}; }

}  // namespace

TEST_CASE("base64 against independently computed values") {
  CHECK(base64_encode("Aladdin:open sesame") == "QWxhZGRpbjpvcGVuIHNlc2FtZQ==");
  CHECK(base64_encode("a:b") == "YTpi");
  const std::pair<const char*, const char*> kVectors[] = {
      {"", ""},         {"f", "Zg=="},         {"fo", "Zm8="},        {"foo", "Zm9v"},
      {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="}, {"foobar", "Zm9vYmFy"}};
  for (auto [plain, coded] : kVectors) {
    CHECK(base64_encode(plain) == coded);
    CHECK(base64_decode(coded) == plain);
  }
  CHECK_THROWS_AS(base64_decode("abc"), Error);
  CHECK_THROWS_AS(base64_decode("a=bc"), Error);
}

TEST_CASE("property: base64 round trip on random bytes") {
  std::mt19937 rng(1);
  for (int i = 0; i < 500; ++i) {
    std::string bytes(rng() % 40, '\0');
    for (auto& c : bytes) c = static_cast<char>(rng());
    CHECK(base64_decode(base64_encode(bytes)) == bytes);
  }
}

TEST_CASE("basic auth header") {
  auto b = basic();
  b->configure({}, {});
  auto r = b->invoke("apply", {{"login", "Aladdin"}, {"password", "open sesame"}});
  REQUIRE(r.ok());
  CHECK(r.emitted_metadata.at("header:Authorization") == "Basic QWxhZGRpbjpvcGVuIHNlc2FtZQ==");
  CHECK(b->invoke("apply", {{"login", "a"}, {"password", "b"}}).emitted_metadata.at(
            "header:Authorization") == "Basic YTpi");
  auto missing = b->invoke("apply", {{"login", ""}, {"password", "x"}});
  CHECK(missing.outcome == ResultOutcome::kError);
  CHECK(missing.code == "MissingCredential");
  CHECK_FALSE(missing.detail.empty());
}

TEST_CASE("basic auth falls back to configured credentials") {
  auto b = basic();
  b->configure({{"login", "vms"}, {"password", "pw1"}}, {});
  CHECK(b->invoke("apply", {}).emitted_metadata.at("header:Authorization") == "Basic dm1zOnB3MQ==");
  CHECK(code_of([&] { b->configure({{"user", "x"}}, {}); }) == Errc::kInvalidConfigKey);
}

TEST_CASE("xml token is bit exact") {
  auto s = sts();
  s->configure({{"schema_ref", "urn:cp3:token:v1"}}, {});
  auto r = s->invoke("issue", {{"login", "vms"}, {"password", "pw1"},
                               {"issued_at", "2010-01-01T00:00:00Z"}});
  REQUIRE(r.ok());
  CHECK(r.emitted_metadata.at("token") ==
        "<token xmlns=\"urn:cp3:token:v1\"><login>vms</login><password>pw1</password>"
        "<issued>2010-01-01T00:00:00Z</issued></token>");
  CHECK(r.emitted_metadata.at("body:prepend") == r.emitted_metadata.at("token"));
}

TEST_CASE("xml token schema checks") {
  CHECK(code_of([] {
          parse_token("<token xmlns=\"urn:cp3:token:v1\"><login>a</login><password>b</password></token>");
        }) == Errc::kSchemaViolation);
  CHECK(code_of([] {
          parse_token("<token><login>a</login><password>b</password><issued>2010-01-01T00:00:00Z</issued></token>");
        }) == Errc::kSchemaViolation);
  CHECK(code_of([] {
          parse_token("<token xmlns=\"urn:cp3:token:v1\"><password>b</password><login>a</login><issued>2010-01-01T00:00:00Z</issued></token>");
        }) == Errc::kSchemaViolation);
  CHECK(code_of([] {
          parse_token("<token xmlns=\"urn:cp3:token:v1\"><login>a</login><password>b</password><issued>yesterday</issued></token>");
        }) == Errc::kSchemaViolation);
  XmlToken odd{"a<&>\"'", "p w", "2010-01-01T00:00:00Z"};
  CHECK(parse_token(render_token(odd)) == odd);
  CHECK(token_prefix_length(render_token(odd) + "rest") == render_token(odd).size());
  CHECK(token_prefix_length("plain body") == 0);
}

TEST_CASE("xml token validation") {
  auto s = sts();
  s->configure({{"max_age_seconds", "60"}, {"credential.vms", "pw1"}}, {});
  auto token = render_token({"vms", "pw1", "2010-01-01T00:00:00Z"});
  auto at = [&](const std::string& now) {
    return s->invoke("validate", {{"token", token}, {"now", now}});
  };
  CHECK(at("2010-01-01T00:00:00Z").ok());
  CHECK(at("2010-01-01T00:01:00Z").ok());
  CHECK(at("2010-01-01T00:01:01Z").code == "TokenExpired");
  CHECK(s->invoke("validate", {{"token", render_token({"vms", "bad", "2010-01-01T00:00:00Z"})},
                               {"now", "2010-01-01T00:00:00Z"}})
            .code == "UnknownPrincipal");
  CHECK(s->invoke("validate", {{"token", "<token/>"}}).code == "SchemaViolation");
  CHECK(code_of([&] { s->configure({{"schema_ref", "urn:other"}}, {}); }) ==
        Errc::kInvalidConfigValue);
  CHECK(code_of([&] { s->configure({{"max_age_seconds", "-1"}}, {}); }) ==
        Errc::kInvalidConfigValue);
}

TEST_CASE("property: token round trip inside the age window, inclusive bound") {
  std::mt19937 rng(21);
  auto s = sts();
  Params table{{"max_age_seconds", "120"}};
  for (int i = 0; i < 20; ++i) table["credential.user" + std::to_string(i)] = "pw" + std::to_string(i);
  s->configure(table, {});
  const TimePoint base = parse_iso8601("2010-06-01T12:00:00Z");
  for (int i = 0; i < 500; ++i) {
    int who = static_cast<int>(rng() % 20);
    int age = static_cast<int>(rng() % 240);
    TimePoint issued = base;
    TimePoint now = base + std::chrono::seconds(age);
    auto issue = s->invoke("issue", {{"login", "user" + std::to_string(who)},
                                     {"password", "pw" + std::to_string(who)},
                                     {"issued_at", format_iso8601(issued)}});
    REQUIRE(issue.ok());
    auto check = s->invoke("validate", {{"token", issue.emitted_metadata.at("token")},
                                        {"now", format_iso8601(now)}});
    if (age <= 120) {
      CHECK(check.ok());
    } else {
      CHECK(check.code == "TokenExpired");
    }
  }
}

TEST_CASE("secpal pdp decisions agree with the closure oracle") {
  auto p = pdp();
  p->configure({{"resource_owner", "CP2"}},
               {secpal("CP2 says VMS can read catalog\nCP2 says STS can say X can read catalog")});
  auto ask = [&](const std::string& subject, const std::string& presented) {
    return p->invoke("authorize", {{"subject", subject},
                                   {"action", "read"},
                                   {"resource", "catalog"},
                                   {"presented_assertions", presented}});
  };
  std::vector<std::string> store{"CP2 says VMS can read catalog",
                                 "CP2 says STS can say X can read catalog"};
  CHECK(ask("VMS", "").ok() == oracle::derivable(store, "CP2 says VMS can read catalog"));
  auto with_alice = store;
  with_alice.push_back("STS says Alice can read catalog");
  REQUIRE(oracle::derivable(with_alice, "CP2 says Alice can read catalog"));
  auto alice = ask("Alice", "STS says Alice can read catalog");
  CHECK(alice.ok());
  CHECK(alice.emitted_metadata.at("proof_id").rfind("proof-", 0) == 0);
  CHECK(alice.emitted_metadata.at("header:X-Proof-Id") == alice.emitted_metadata.at("proof_id"));
  REQUIRE_FALSE(oracle::derivable(store, "CP2 says Mallory can read catalog"));
  auto mallory = ask("Mallory", "");
  CHECK(mallory.outcome == ResultOutcome::kDenied);
  CHECK_FALSE(mallory.detail.empty());
  CHECK(ask("Alice", "garbage here").code == "SyntaxError");
}

TEST_CASE("pdp rejects foreign grammars and bad stores") {
  auto p = pdp();
  CHECK(code_of([&] {
          p->configure({{"resource_owner", "CP2"}}, {{"custom-xml", "<p/>", "t"}});
        }) == Errc::kPolicyGrammarUnsupported);
  CHECK(p->state() == InstanceState::kConfigured);
  CHECK(code_of([&] { p->configure({{"resource_owner", "CP2"}}, {secpal("CP2 says")}); }) ==
        Errc::kSyntaxError);
  CHECK(code_of([&] { p->configure({}, {}); }) == Errc::kInvalidConfigValue);
}

TEST_CASE("secpal token service vouches only for the subject") {
  auto s = secpal_sts();
  s->configure({{"principal", "STS"}},
               {secpal("STS says Alice can read catalog\nSTS says Bob can read catalog\n"
                       "Other says Alice can write catalog")});
  auto r = s->invoke("issue", {{"subject", "Alice"}});
  REQUIRE(r.ok());
  CHECK(r.emitted_metadata.at("header:X-SecPAL-Assertions") == "STS says Alice can read catalog");
  CHECK(s->invoke("issue", {{"subject", "Mallory"}}).emitted_metadata.at(
            "header:X-SecPAL-Assertions") == "");
}

TEST_CASE("configure, reconfigure, rollback") {
  auto trail = std::make_shared<AuditTrail>("p");
  auto a = audit(trail);
  a->configure({{"hash_alg", "sha-256"}}, {});
  CHECK(a->state() == InstanceState::kActive);
  a->configure({{"hash_alg", "sha-512"}}, {});
  CHECK(a->current()->config.at("hash_alg") == "sha-512");
  CHECK(a->current()->version == 2);
  a->rollback();
  CHECK(a->current()->config == Params{{"hash_alg", "sha-256"}});
  CHECK(a->current()->version == 1);
  CHECK(code_of([&] { a->rollback(); }) == Errc::kInvalidArgument);
  CHECK(code_of([&] { a->configure({{"hash_alg", "md5"}}, {}); }) == Errc::kInvalidConfigValue);
  CHECK(a->current()->config.at("hash_alg") == "sha-256");
}

TEST_CASE("property: data pane never mutates the policy store") {
  auto p = pdp();
  p->configure({{"resource_owner", "CP2"}}, {secpal("CP2 says VMS can read catalog")});
  auto s = secpal_sts();
  s->configure({{"principal", "STS"}}, {secpal("STS says Alice can read catalog")});
  std::mt19937 rng(2);
  const char* subjects[] = {"VMS", "Alice", "Mallory"};
  for (int i = 0; i < 200; ++i) {
    auto before_p = p->policy_store();
    auto before_s = s->policy_store();
    auto before_version = p->current()->version;
    p->invoke("authorize", {{"subject", subjects[rng() % 3]}, {"action", "read"},
                            {"resource", "catalog"}, {"presented_assertions", ""}});
    s->invoke("issue", {{"subject", subjects[rng() % 3]}});
    CHECK(p->policy_store() == before_p);
    CHECK(s->policy_store() == before_s);
    CHECK(p->current()->version == before_version);
  }
}

TEST_CASE("property: fail-closed in every non-active state for every kind") {
  auto trail = std::make_shared<AuditTrail>("p");
  std::vector<std::function<std::shared_ptr<CapabilityInstance>()>> kinds{
      basic, sts, pdp, secpal_sts, [&] { return audit(trail); },
      [] {
        return make_instance("i-x", descriptor("x", "transformation", "identity-transform"), {});
      }};
  for (const auto& make : kinds) {
    auto configured = make();
    auto failed = make();
    failed->fail();
    for (const auto& inst : {configured, failed}) {
      REQUIRE(inst->state() != InstanceState::kActive);
      for (const auto& [op, slots] : inst->operations()) {
        CHECK(code_of([&] { inst->invoke(op, {}); }) == Errc::kInstanceNotActive);
      }
    }
    CHECK(code_of([&] { failed->configure({}, {}); }) == Errc::kInstanceNotActive);
  }
  CHECK(trail->size() == 0);
}

TEST_CASE("unknown operations and mechanisms") {
  auto b = basic();
  b->configure({}, {});
  CHECK(code_of([&] { b->invoke("nope", {}); }) == Errc::kInvalidArgument);
  CHECK(code_of([] { make_instance("i", descriptor("t", "transport", "tls"), {}); }) ==
        Errc::kInvalidDescriptor);
}

TEST_CASE("identity transform renames fields") {
  auto t = make_instance("i-x", descriptor("x", "transformation", "identity-transform"), {});
  t->configure({{"rename.login", "username"}}, {});
  auto r = t->invoke("transform", {{"login", "a"}, {"x", "b"}});
  CHECK(r.emitted_metadata == Params{{"header:username", "a"}, {"header:x", "b"}});
  CHECK(t->invoke("transform", {{"login", "a"}, {"username", "b"}}).code == "RenameCollision");
}

TEST_CASE("instance pool tracks live instances") {
  InstancePool pool;
  auto d = descriptor("basic", "identity-management", "http-basic");
  auto a = pool.create("cp1", d, {});
  auto b = pool.create("cp1", d, {});
  CHECK(a->instance_id() != b->instance_id());
  CHECK(pool.live().size() == 2);
  CHECK(pool.of_capability("basic").size() == 2);
  pool.retire(a->instance_id());
  CHECK(pool.live() == std::set<std::string>{b->instance_id()});
  CHECK(pool.get(a->instance_id()) == nullptr);
}
