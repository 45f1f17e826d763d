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
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "closure_oracle.hpp"
#include "govgw/common/error.hpp"
#include "govgw/policy/derivation.hpp"

using namespace govgw;
using namespace govgw::policy;

namespace {

std::vector<Assertion> parse_all(const std::vector<std::string>& lines) {
  std::vector<Assertion> out;
  for (const auto& l : lines) out.push_back(parse_assertion(l));
  return out;
}

Decision run(const std::vector<std::string>& ctx, const std::string& query) {
  return derive(parse_all(ctx), parse_query(query));
}

const char* kPrincipals[] = {"CP2", "STS", "Alice"};
const char* kActions[] = {"read", "write"};
const char* kResources[] = {"catalog"};

std::string random_fact(std::mt19937& rng, int depth, bool vars) {
  auto pick = [&](auto& arr) { return std::string(arr[rng() % std::size(arr)]); };
  auto principal = [&] { return vars && rng() % 4 == 0 ? std::string("X") : pick(kPrincipals); };
  int form = static_cast<int>(rng() % (depth < 2 ? 4 : 2));
  if (form == 0) return principal() + " can " + pick(kActions) + " " + pick(kResources);
  if (form == 1) return principal() + " can-act-as " + principal();
  return principal() + " can say " + random_fact(rng, depth + 1, true);
}

std::vector<std::string> random_context(std::mt19937& rng, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(std::string(kPrincipals[rng() % 3]) + " says " + random_fact(rng, 0, false));
  }
  return out;
}

std::vector<std::string> all_queries() {
  std::vector<std::string> out;
  for (auto* i : kPrincipals) {
    for (auto* s : kPrincipals) {
      for (auto* a : kActions) {
        for (auto* r : kResources) {
          out.push_back(std::string(i) + " says " + s + " can " + a + " " + r + "?");
        }
      }
      for (auto* t : kPrincipals) {
        out.push_back(std::string(i) + " says " + s + " can-act-as " + t + "?");
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("stated fact is permitted with a one-step proof") {
  std::vector<std::string> ctx{"CP2 says VMS can read catalog"};
  Decision d = run(ctx, "CP2 says VMS can read catalog?");
  REQUIRE(d.permitted());
  REQUIRE(d.proof.size() == 1);
  CHECK(rule_name(d.proof[0].rule) == "R1");
  CHECK(check_proof(parse_all(ctx), parse_query("CP2 says VMS can read catalog?"), d));
}

TEST_CASE("delegation to a token service with a variable") {
  std::vector<std::string> ctx{"CP2 says STS can say X can read catalog",
                               "STS says Alice can read catalog"};
  const std::string q = "CP2 says Alice can read catalog?";
  REQUIRE(oracle::derivable(ctx, q));
  Decision d = run(ctx, q);
  REQUIRE(d.permitted());
  CHECK(d.proof.back().rule == Rule::kDelegation);
  CHECK(check_proof(parse_all(ctx), parse_query(q), d));
}

TEST_CASE("absent fact is denied with an empty proof") {
  std::vector<std::string> ctx{"CP2 says VMS can read catalog"};
  const std::string q = "CP2 says Alice can read catalog?";
  REQUIRE_FALSE(oracle::derivable(ctx, q));
  Decision d = run(ctx, q);
  CHECK_FALSE(d.permitted());
  CHECK(d.proof.empty());
}

TEST_CASE("alias inherits grants of the target within one issuer") {
  std::vector<std::string> ctx{"CP2 says Alice can-act-as VMS", "CP2 says VMS can read catalog",
                               "STS says Bob can-act-as VMS"};
  CHECK(run(ctx, "CP2 says Alice can read catalog?").permitted());
  CHECK_FALSE(run(ctx, "STS says Bob can read catalog?").permitted());
  CHECK_FALSE(run(ctx, "CP2 says VMS can-act-as Alice?").permitted());
}

TEST_CASE("nested delegation chains down to the speaker") {
  std::vector<std::string> ctx{"CP2 says STS can say IdP can say Alice can read catalog",
                               "STS says IdP can say Alice can read catalog",
                               "IdP says Alice can read catalog"};
  Decision d = run(ctx, "CP2 says Alice can read catalog?");
  REQUIRE(d.permitted());
  CHECK(check_proof(parse_all(ctx), parse_query("CP2 says Alice can read catalog?"), d));
}

TEST_CASE("delegated fact must match exactly") {
  std::vector<std::string> ctx{"CP2 says STS can say Alice can read catalog",
                               "STS says Alice can write catalog"};
  CHECK_FALSE(run(ctx, "CP2 says Alice can write catalog?").permitted());
}

TEST_CASE("oversized context is rejected") {
  std::vector<Assertion> ctx(kMaxContextSize + 1, parse_assertion("CP2 says VMS can read catalog"));
  CHECK_THROWS_AS(Closure{ctx}, Error);
  ctx.pop_back();
  CHECK(Closure(ctx).size() == 1);
}

TEST_CASE("tampered proofs fail the replay") {
  std::vector<std::string> ctx{"CP2 says STS can say X can read catalog",
                               "STS says Alice can read catalog"};
  auto context = parse_all(ctx);
  Query q = parse_query("CP2 says Alice can read catalog?");
  Decision d = derive(context, q);
  REQUIRE(check_proof(context, q, d));

  Decision wrong_rule = d;
  wrong_rule.proof.back().rule = Rule::kAlias;
  CHECK_FALSE(check_proof(context, q, wrong_rule));

  Decision missing_premise = d;
  missing_premise.proof.erase(missing_premise.proof.begin());
  CHECK_FALSE(check_proof(context, q, missing_premise));

  Decision other_query = d;
  CHECK_FALSE(check_proof(context, parse_query("CP2 says Bob can read catalog?"), other_query));

  Decision empty_permit;
  empty_permit.outcome = Outcome::kPermit;
  CHECK_FALSE(check_proof(context, q, empty_permit));
}

TEST_CASE("property: engine agrees with the brute-force oracle") {
  std::mt19937 rng(11);
  auto queries = all_queries();
  for (int trial = 0; trial < 400; ++trial) {
    auto ctx = random_context(rng, 1 + rng() % 6);
    auto closure = oracle::closure(ctx);
    auto parsed = parse_all(ctx);
    Closure engine(parsed);
    for (const auto& q : queries) {
      Query query = parse_query(q);
      bool expected = closure.count(oracle::split(q)) > 0;
      Decision d = engine.decide(query);
      CHECK_MESSAGE(d.permitted() == expected, q << " over " << oracle::join(ctx));
      if (d.permitted()) CHECK(check_proof(parsed, query, d));
    }
  }
}

TEST_CASE("property: monotonicity") {
  std::mt19937 rng(13);
  auto queries = all_queries();
  for (int trial = 0; trial < 200; ++trial) {
    auto base = random_context(rng, 1 + rng() % 4);
    auto more = base;
    for (const auto& extra : random_context(rng, 1 + rng() % 4)) more.push_back(extra);
    Closure small(parse_all(base));
    Closure big(parse_all(more));
    for (const auto& q : queries) {
      Query query = parse_query(q);
      if (small.holds(query)) CHECK(big.holds(query));
    }
  }
}

TEST_CASE("property: assume then rollback matches a fresh closure") {
  std::mt19937 rng(17);
  auto queries = all_queries();
  for (int trial = 0; trial < 200; ++trial) {
    auto base = random_context(rng, 1 + rng() % 3);
    auto extra = random_context(rng, 1 + rng() % 3);
    Closure layered(parse_all(base));
    auto m = layered.mark();
    layered.assume(parse_all(extra));
    auto both = base;
    both.insert(both.end(), extra.begin(), extra.end());
    Closure fresh_both(parse_all(both));
    for (const auto& q : queries) {
      CHECK(layered.holds(parse_query(q)) == fresh_both.holds(parse_query(q)));
    }
    layered.rollback(m);
    Closure fresh_base(parse_all(base));
    CHECK(layered.size() == fresh_base.size());
    for (const auto& q : queries) {
      Query query = parse_query(q);
      CHECK(layered.holds(query) == fresh_base.holds(query));
      Decision d = layered.decide(query);
      if (d.permitted()) CHECK(check_proof(parse_all(base), query, d));
    }
  }
}
