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
#ifndef GOVGW_POLICY_DERIVATION_HPP_
#define GOVGW_POLICY_DERIVATION_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "govgw/policy/secpal.hpp"

namespace govgw::policy {

// Derivation rules:
//   R1 stated      every context assertion holds
//   R2 delegation  A says B can say F, B says F        => A says F
//   R3 alias       A says B can-act-as C, A says C can a r  => A says B can a r
enum class Rule { kStated, kDelegation, kAlias };
std::string_view rule_name(Rule rule);

enum class Outcome { kPermit, kDeny };

struct ProofStep {
  Rule rule;
  std::vector<Assertion> premises;
  Assertion conclusion;
};

// Deny by default. A permit carries one derivation of the queried fact,
// premises before conclusions.
struct Decision {
  Outcome outcome = Outcome::kDeny;
  std::vector<ProofStep> proof;

  bool permitted() const { return outcome == Outcome::kPermit; }
};

inline constexpr std::size_t kMaxContextSize = 10'000;

// Least fixpoint of R1-R3 over a context. Assertions with variables are
// grounded over the principals that occur in the context. Evaluation is
// semi-naive: every fact is joined once against indexed partners.
//
// Assertions can be layered on with assume() and peeled off again with
// rollback(), e.g. request-time assertions over a fixed policy store.
class Closure {
 private:
  static constexpr std::size_t kMaxKey = 1 + 2 * kMaxDelegationDepth + 4;

  struct Key {
    std::array<std::uint32_t, kMaxKey> v{};
    std::uint8_t len = 0;

    void push(std::uint32_t x) { v[len++] = x; }
    bool operator==(const Key& o) const;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

 public:
  // An assertion or query encoded against this closure's symbol table.
  class Prepared {
   private:
    friend class Closure;
    Assertion source_;
    bool ground_ = true;
    Key key_;
    std::vector<std::uint32_t> principals_;
  };
  class PreparedQuery {
   private:
    friend class Closure;
    Key key_;
  };
  struct Mark {
    std::size_t facts = 0;
    std::size_t patterns = 0;
    std::size_t principals = 0;
    std::size_t stated = 0;
  };

  Closure() = default;
  // Throws kInvalidArgument when the context exceeds kMaxContextSize or an
  // assertion nests delegation deeper than kMaxDelegationDepth.
  explicit Closure(std::span<const Assertion> context);

  Prepared prepare(const Assertion& assertion);
  // Throws kInvalidArgument for a CanSay or non-ground query.
  PreparedQuery prepare(const Query& query);

  void assume(std::span<const Assertion> assertions);
  void assume(const Prepared& assertion);
  Mark mark() const;
  // Forgets everything assumed after m was taken.
  void rollback(const Mark& m);

  bool holds(const Query& query) const;
  bool holds(const PreparedQuery& query) const { return index_.count(query.key_) > 0; }
  Decision decide(const Query& query) const;

  std::size_t size() const { return facts_.size(); }
  std::vector<Assertion> facts() const;

 private:
  struct Justification {
    Rule rule;
    // Premise fact indices; for R1, first indexes patterns_ (or is -1 when
    // the stated assertion was already ground).
    std::int32_t first = -1;
    std::int32_t second = -1;
  };
  struct Grant {
    std::uint32_t action;
    std::uint32_t resource;
    std::uint32_t fact;
  };
  struct Alias {
    std::uint32_t subject;
    std::uint32_t fact;
  };

  std::uint32_t intern(const std::string& name);
  bool lookup(const std::string& name, std::uint32_t& id) const;
  void assume_all(std::span<const Prepared> batch);
  void ground(std::size_t pattern);
  bool encode(const Fact& fact, const std::vector<std::string>& vars,
              const std::vector<std::uint32_t>& values, Key& key, bool intern_new);
  void add(const Key& key, Justification why);
  void saturate();
  void unprocess(std::uint32_t fact);
  Fact decode_fact(const Key& key, std::size_t& pos) const;
  Assertion decode(const Key& key) const;
  bool find_query(const Query& query, std::uint32_t& index) const;

  std::vector<Assertion> patterns_;  // stated assertions with variables
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::uint32_t> principals_;
  std::vector<char> is_principal_;
  std::size_t stated_ = 0;
  std::vector<Key> facts_;
  std::vector<Justification> why_;
  std::size_t processed_ = 0;
  std::unordered_map<Key, std::uint32_t, KeyHash> index_;
  // "B says F" -> delegations "A says B can say F" waiting for it.
  std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash> waiting_;
  // (issuer, principal) -> grants / aliases of that principal.
  std::unordered_map<std::uint64_t, std::vector<Grant>> grants_;
  std::unordered_map<std::uint64_t, std::vector<Alias>> aliases_;
};

// Permit iff the query fact is derivable from the context.
Decision derive(std::span<const Assertion> context, const Query& query);

// Replays a decision's proof step by step against the rules; true iff every
// step is justified and a permit ends up establishing the queried fact.
bool check_proof(std::span<const Assertion> context, const Query& query,
                 const Decision& decision);

}  // namespace govgw::policy

#endif  // GOVGW_POLICY_DERIVATION_HPP_
