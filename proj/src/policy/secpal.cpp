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
#include "govgw/policy/secpal.hpp"

#include "govgw/common/error.hpp"

namespace govgw::policy {

Fact Fact::can(std::string subject, std::string action, std::string resource) {
  return Fact{Can{std::move(subject), std::move(action), std::move(resource)}};
}

Fact Fact::can_act_as(std::string subject, std::string target) {
  return Fact{CanActAs{std::move(subject), std::move(target)}};
}

Fact Fact::can_say(std::string delegate, Fact inner) {
  return Fact{CanSay{std::move(delegate), std::make_shared<const Fact>(std::move(inner))}};
}

int Fact::depth() const {
  if (const auto* say = std::get_if<CanSay>(&form)) return 1 + say->inner->depth();
  return 0;
}

bool Fact::is_ground() const {
  return std::visit(
      [](const auto& f) -> bool {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Can>) {
          return !is_variable(f.subject);
        } else if constexpr (std::is_same_v<T, CanActAs>) {
          return !is_variable(f.subject) && !is_variable(f.target);
        } else {
          return !is_variable(f.delegate) && f.inner->is_ground();
        }
      },
      form);
}

bool operator==(const Fact& a, const Fact& b) {
  if (a.form.index() != b.form.index()) return false;
  if (const auto* x = std::get_if<Can>(&a.form)) {
    const auto& y = std::get<Can>(b.form);
    return x->subject == y.subject && x->action == y.action && x->resource == y.resource;
  }
  if (const auto* x = std::get_if<CanActAs>(&a.form)) {
    const auto& y = std::get<CanActAs>(b.form);
    return x->subject == y.subject && x->target == y.target;
  }
  const auto& x = std::get<CanSay>(a.form);
  const auto& y = std::get<CanSay>(b.form);
  return x.delegate == y.delegate && *x.inner == *y.inner;
}

bool operator==(const Assertion& a, const Assertion& b) {
  return a.issuer == b.issuer && a.fact == b.fact;
}

bool is_identifier(std::string_view token) {
  if (token.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  if (!alpha(token[0])) return false;
  for (char c : token.substr(1)) {
    if (!alpha(c) && !(c >= '0' && c <= '9') && c != '_' && c != '-') return false;
  }
  return true;
}

bool is_variable(std::string_view principal) {
  return principal.size() == 1 && principal[0] >= 'A' && principal[0] <= 'Z';
}

std::string to_string(const Fact& fact) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Can>) {
          return f.subject + " can " + f.action + " " + f.resource;
        } else if constexpr (std::is_same_v<T, CanActAs>) {
          return f.subject + " can-act-as " + f.target;
        } else {
          return f.delegate + " can say " + to_string(*f.inner);
        }
      },
      fact.form);
}

std::string to_string(const Assertion& assertion) {
  return assertion.issuer + " says " + to_string(assertion.fact);
}

std::string to_string(const Query& query) {
  return query.issuer + " says " + to_string(query.fact) + "?";
}

namespace {

struct Token {
  std::string_view text;
  std::size_t offset;
};

class Parser {
 public:
  explicit Parser(std::string_view line) : end_(line.size()) {
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t space = line.find(' ', pos);
      if (space == std::string_view::npos) space = line.size();
      tokens_.push_back({line.substr(pos, space - pos), pos});
      pos = space + 1;
    }
    for (const auto& t : tokens_) {
      if (t.text.empty()) throw SyntaxError(t.offset, "empty token (tokens are separated by one space)");
    }
  }

  // Strips a trailing '?' from the last token; used for queries.
  void strip_question_mark() {
    auto& last = tokens_.back();
    if (last.text.empty() || last.text.back() != '?') {
      throw SyntaxError(end_, "query must end with '?'");
    }
    last.text.remove_suffix(1);
    if (last.text.empty()) throw SyntaxError(last.offset, "expected token before '?'");
  }

  Assertion assertion() {
    std::string issuer = principal(/*variables_allowed=*/false);
    expect("says");
    Fact f = fact(0, /*variables_allowed=*/false);
    if (pos_ != tokens_.size()) throw SyntaxError(tokens_[pos_].offset, "unexpected token");
    return {std::move(issuer), std::move(f)};
  }

 private:
  std::size_t offset_here() const {
    return pos_ < tokens_.size() ? tokens_[pos_].offset : end_;
  }

  std::string_view take(const char* what) {
    if (pos_ >= tokens_.size()) throw SyntaxError(end_, std::string("expected ") + what);
    return tokens_[pos_++].text;
  }

  void expect(std::string_view keyword) {
    std::size_t at = offset_here();
    auto t = take(std::string("'" + std::string(keyword) + "'").c_str());
    if (t != keyword) throw SyntaxError(at, "expected '" + std::string(keyword) + "'");
  }

  std::string identifier(const char* what) {
    std::size_t at = offset_here();
    auto t = take(what);
    if (!is_identifier(t)) throw SyntaxError(at, std::string("invalid ") + what);
    return std::string(t);
  }

  std::string principal(bool variables_allowed) {
    std::size_t at = offset_here();
    std::string p = identifier("principal");
    if (is_variable(p) && !variables_allowed) {
      throw SyntaxError(at, "variable '" + p + "' outside a delegated fact");
    }
    return p;
  }

  Fact fact(int depth, bool variables_allowed) {
    std::string subject = principal(variables_allowed);
    std::size_t at = offset_here();
    auto verb = take("'can' or 'can-act-as'");
    if (verb == "can-act-as") {
      return Fact::can_act_as(std::move(subject), principal(variables_allowed));
    }
    if (verb != "can") throw SyntaxError(at, "expected 'can' or 'can-act-as'");
    // "can say" opens a delegation only when a whole fact follows; with
    // exactly two tokens left, "say" is an ordinary action.
    std::size_t remaining = tokens_.size() - pos_;
    if (remaining > 2 && tokens_[pos_].text == "say") {
      std::size_t say_at = tokens_[pos_].offset;
      ++pos_;
      if (depth + 1 > kMaxDelegationDepth) {
        throw SyntaxError(say_at, "delegation nested deeper than " +
                                      std::to_string(kMaxDelegationDepth));
      }
      return Fact::can_say(std::move(subject), fact(depth + 1, /*variables_allowed=*/true));
    }
    std::string action = identifier("action");
    std::string resource = identifier("resource");
    return Fact::can(std::move(subject), std::move(action), std::move(resource));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t end_;
};

}  // namespace

Assertion parse_assertion(std::string_view line) {
  Parser p(line);
  return p.assertion();
}

Query parse_query(std::string_view line) {
  Parser p(line);
  p.strip_question_mark();
  Assertion a = p.assertion();
  if (std::holds_alternative<CanSay>(a.fact.form)) {
    throw SyntaxError(0, "a query cannot ask about a delegation");
  }
  return {std::move(a.issuer), std::move(a.fact)};
}

std::vector<Assertion> parse_assertions(std::string_view text) {
  std::vector<Assertion> out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (!line.empty() && line[0] != '#') {
      try {
        out.push_back(parse_assertion(line));
      } catch (const SyntaxError& e) {
        throw SyntaxError(e.offset(), "line " + std::to_string(line_no) + ": " + e.reason());
      }
    }
    if (nl == text.size()) break;
    pos = nl + 1;
  }
  return out;
}

}  // namespace govgw::policy
