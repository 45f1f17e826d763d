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
#ifndef GOVGW_POLICY_SECPAL_HPP_
#define GOVGW_POLICY_SECPAL_HPP_

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace govgw::policy {

// Authorisation language: a SecPAL-style fragment with three fact forms and
// bounded delegation.
//
//   assertion := principal "says" fact
//   fact      := principal "can" action resource
//              | principal "can-act-as" principal
//              | principal "can say" fact
//   query     := assertion "?"
//
// A principal spelled as a single upper-case letter (X, Y, ...) is a
// variable. Variables may only appear inside a delegated fact, where they
// stand for any principal.

inline constexpr int kMaxDelegationDepth = 3;

struct Fact;

struct Can {
  std::string subject;
  std::string action;
  std::string resource;
};

struct CanActAs {
  std::string subject;
  std::string target;
};

struct CanSay {
  std::string delegate;
  std::shared_ptr<const Fact> inner;
};

struct Fact {
  std::variant<Can, CanActAs, CanSay> form;

  static Fact can(std::string subject, std::string action, std::string resource);
  static Fact can_act_as(std::string subject, std::string target);
  static Fact can_say(std::string delegate, Fact inner);

  // Number of nested "can say" wrappers.
  int depth() const;
  bool is_ground() const;
};

bool operator==(const Fact& a, const Fact& b);

struct Assertion {
  std::string issuer;
  Fact fact;
};

bool operator==(const Assertion& a, const Assertion& b);

// A question about a single Can or CanActAs fact.
struct Query {
  std::string issuer;
  Fact fact;

  Assertion as_assertion() const { return {issuer, fact}; }
};

bool is_identifier(std::string_view token);
bool is_variable(std::string_view principal);

std::string to_string(const Fact& fact);
std::string to_string(const Assertion& assertion);
std::string to_string(const Query& query);

// Throws SyntaxError carrying the byte offset of the offending token.
Assertion parse_assertion(std::string_view line);
Query parse_query(std::string_view line);

// One assertion per line; blank lines and lines starting with '#' are
// skipped. SyntaxError messages name the 1-based line.
std::vector<Assertion> parse_assertions(std::string_view text);

}  // namespace govgw::policy

#endif  // GOVGW_POLICY_SECPAL_HPP_
