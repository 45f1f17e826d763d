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
#include <map>
#include <random>
#include <string>

#include <doctest.h>

#include "govgw/common/error.hpp"
#include "govgw/policy/dependencies.hpp"
#include "govgw/policy/template.hpp"
#include "govgw/policy/transform.hpp"

using namespace govgw;
using namespace govgw::policy;
using profile::TransformDescriptor;
using profile::TransformKind;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::kIoError;
}

TransformDescriptor rename(std::string from, std::string to,
                           std::map<std::string, std::string> m) {
  return {std::move(from), std::move(to), TransformKind::kFieldRename, std::move(m)};
}

TransformDescriptor identity(std::string grammar) {
  return {grammar, grammar, TransformKind::kIdentity, {}};
}

// Grammar-changing step that leaves every key alone.
TransformDescriptor relabel(std::string from, std::string to) {
  return rename(std::move(from), std::move(to), {});
}

}  // namespace

TEST_CASE("template substitution") {
  PolicyTemplate t("acl", "secpal", "permit ${subject} read ${resource}");
  CHECK(t.required_keys() == std::set<std::string>{"resource", "subject"});
  auto out = instantiate_template(t, {{"subject", "VMS"}, {"resource", "catalog"}});
  CHECK(out.policy.body == "permit VMS read catalog");
  CHECK(out.policy.grammar == "secpal");
  CHECK(out.policy.source_template == "acl");
  CHECK(out.unused_bindings.empty());
}

TEST_CASE("missing binding names the key") {
  PolicyTemplate t("acl", "secpal", "permit ${subject} read ${resource}");
  try {
    instantiate_template(t, {{"subject", "VMS"}});
    FAIL("expected MissingBinding");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kMissingBinding);
    CHECK(e.detail() == "resource");
  }
}

TEST_CASE("placeholder-free template is unchanged") {
  PolicyTemplate t("plain", "secpal", "CP2 says VMS can read catalog");
  CHECK(instantiate_template(t, {}).policy.body == t.body());
}

TEST_CASE("unused bindings are reported, not fatal") {
  PolicyTemplate t("acl", "secpal", "${a}");
  auto out = instantiate_template(t, {{"a", "1"}, {"b", "2"}});
  CHECK(out.policy.body == "1");
  CHECK(out.unused_bindings == std::vector<std::string>{"b"});
}

TEST_CASE("escape and syntax errors") {
  PolicyTemplate t("esc", "secpal", "cost $${x} for ${who}");
  CHECK(t.required_keys() == std::set<std::string>{"who"});
  CHECK(instantiate_template(t, {{"who", "VMS"}}).policy.body == "cost ${x} for VMS");
  CHECK(code_of([] { PolicyTemplate("t", "g", "oops ${open"); }) == Errc::kTemplateSyntax);
  CHECK(code_of([] { PolicyTemplate("t", "g", "${}"); }) == Errc::kTemplateSyntax);
  CHECK(code_of([] { PolicyTemplate("t", "g", "${a b}"); }) == Errc::kTemplateSyntax);
  CHECK_NOTHROW(PolicyTemplate("t", "g", "${token-secpal.principal}"));
}

TEST_CASE("property: placeholder-free bodies are fixed points") {
  std::mt19937 rng(3);
  const std::string alphabet = "ab {}\\$";
  for (int i = 0; i < 3000; ++i) {
    std::string body;
    for (int k = 0; k < 12; ++k) body += alphabet[rng() % alphabet.size()];
    if (body.find("${") != std::string::npos) continue;
    PolicyTemplate t("p", "g", body);
    CHECK(t.required_keys().empty());
    CHECK(instantiate_template(t, {{"x", "1"}, {"subject", "${y}"}}).policy.body == body);
  }
}

TEST_CASE("property: substitution is single pass") {
  std::mt19937 rng(4);
  const std::vector<std::string> values{"VMS", "${subject}", "$${x}", "", "a}b"};
  for (int i = 0; i < 500; ++i) {
    std::string s = values[rng() % values.size()];
    std::string r = values[rng() % values.size()];
    PolicyTemplate t("p", "g", "permit ${subject} read ${resource}");
    auto out = instantiate_template(t, {{"subject", s}, {"resource", r}});
    CHECK(out.policy.body == "permit " + s + " read " + r);
  }
}

TEST_CASE("template library") {
  auto lib = TemplateLibrary::from_json(
      nlohmann::json::parse(R"({"acl":{"grammar":"secpal","body":"${owner} says VMS can read catalog"}})"));
  CHECK(lib.contains("acl"));
  CHECK(lib.get("acl").grammar() == "secpal");
  CHECK(code_of([&] { lib.get("nope"); }) == Errc::kUnknownTemplate);
}

TEST_CASE("transforms") {
  Document doc{{"login", "a"}, {"x", "b"}};
  CHECK(apply_transform(identity("g1"), {{"login", "a"}}) == Document{{"login", "a"}});
  CHECK(apply_transform(rename("g1", "g2", {{"login", "username"}}), doc) ==
        Document{{"username", "a"}, {"x", "b"}});
  CHECK(code_of([] {
          apply_transform(rename("g1", "g2", {{"a", "b"}}), {{"a", "1"}, {"b", "2"}});
        }) == Errc::kRenameCollision);
}

TEST_CASE("property: rename collides iff renamed keys repeat") {
  std::mt19937 rng(5);
  const std::vector<std::string> keys{"a", "b", "c", "d"};
  for (int i = 0; i < 2000; ++i) {
    Document doc;
    for (const auto& k : keys) {
      if (rng() % 2) doc[k] = k + "v";
    }
    // Valid maps only: distinct targets.
    std::map<std::string, std::string> m;
    std::set<std::string> targets;
    for (const auto& k : keys) {
      const std::string& to = keys[rng() % keys.size()];
      if (rng() % 2 && targets.insert(to).second) m[k] = to;
    }
    // Oracle: multiset of post-rename keys.
    std::multiset<std::string> renamed;
    for (const auto& [k, v] : doc) renamed.insert(m.count(k) ? m[k] : k);
    bool dup = std::set<std::string>(renamed.begin(), renamed.end()).size() != renamed.size();
    auto desc = rename("g1", "g2", m);
    if (dup) {
      CHECK(code_of([&] { apply_transform(desc, doc); }) == Errc::kRenameCollision);
    } else {
      auto out = apply_transform(desc, doc);
      CHECK(out.size() == doc.size());
      for (const auto& [k, v] : doc) CHECK(out.at(m.count(k) ? m[k] : k) == v);
    }
  }
}

TEST_CASE("policy dependencies") {
  ConcretePolicy secpal{"secpal", "CP2 says VMS can read catalog", "acl"};
  ConcretePolicy custom{"custom-xml", "<p/>", "x"};
  ConcretePolicy g1{"g1", "...", "y"};
  GrammarTable grammars{{"pdp", {"secpal"}}, {"cap2", {"g2"}}};
  CHECK(validate_policy_dependencies({{secpal, "pdp"}}, {}, grammars).ok());
  auto bad = validate_policy_dependencies({{custom, "pdp"}}, {}, grammars);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].code == "GrammarMismatch");
  CHECK(validate_policy_dependencies({{g1, "cap2"}}, {relabel("g1", "g2")}, grammars).ok());
  CHECK_FALSE(validate_policy_dependencies({{g1, "unknown"}}, {}, grammars).ok());
}

TEST_CASE("property: chain search agrees with enumeration of chains up to two") {
  std::mt19937 rng(9);
  const std::vector<std::string> gs{"g1", "g2", "g3", "g4"};
  for (int i = 0; i < 2000; ++i) {
    std::vector<TransformDescriptor> ts;
    for (int k = rng() % 4; k > 0; --k) ts.push_back(relabel(gs[rng() % 4], gs[rng() % 4]));
    std::set<std::string> accepted{gs[rng() % 4]};
    const std::string from = gs[rng() % 4];
    bool reachable = accepted.count(from) > 0;
    for (const auto& a : ts) {
      if (a.from_grammar == from && accepted.count(a.to_grammar)) reachable = true;
      for (const auto& b : ts) {
        if (a.from_grammar == from && b.from_grammar == a.to_grammar && accepted.count(b.to_grammar)) {
          reachable = true;
        }
      }
    }
    auto chain = find_transform_chain(from, accepted, ts);
    CHECK(chain.has_value() == reachable);
    if (chain) {
      CHECK(chain->size() <= kMaxTransformChain);
      ConcretePolicy p{from, "body", "t"};
      CHECK(accepted.count(retarget(p, *chain).grammar) == 1);
    }
    ConcretePolicy p{from, "b", "t"};
    CHECK(validate_policy_dependencies({{p, "c"}}, ts, {{"c", accepted}}).ok() == reachable);
  }
}
