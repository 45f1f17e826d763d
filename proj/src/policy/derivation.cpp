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
#include "govgw/policy/derivation.hpp"

#include <algorithm>
#include <optional>

#include "govgw/common/error.hpp"

namespace govgw::policy {

namespace {

constexpr std::uint32_t kTagCan = 0;
constexpr std::uint32_t kTagCanActAs = 1;
constexpr std::uint32_t kTagCanSay = 2;

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void collect_variables(const Fact& fact, std::vector<std::string>& vars) {
  auto note = [&](const std::string& p) {
    if (is_variable(p) && std::find(vars.begin(), vars.end(), p) == vars.end()) vars.push_back(p);
  };
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Can>) {
          note(f.subject);
        } else if constexpr (std::is_same_v<T, CanActAs>) {
          note(f.subject);
          note(f.target);
        } else {
          note(f.delegate);
          collect_variables(*f.inner, vars);
        }
      },
      fact.form);
}

void collect_principals(const Fact& fact, std::vector<const std::string*>& out) {
  auto note = [&](const std::string& p) {
    if (!is_variable(p)) out.push_back(&p);
  };
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Can>) {
          note(f.subject);
        } else if constexpr (std::is_same_v<T, CanActAs>) {
          note(f.subject);
          note(f.target);
        } else {
          note(f.delegate);
          collect_principals(*f.inner, out);
        }
      },
      fact.form);
}

}  // namespace

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::kStated: return "R1";
    case Rule::kDelegation: return "R2";
    case Rule::kAlias: return "R3";
  }
  return "?";
}

bool Closure::Key::operator==(const Key& o) const {
  return len == o.len && std::equal(v.begin(), v.begin() + len, o.v.begin());
}

std::size_t Closure::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint8_t i = 0; i < k.len; ++i) {
    h ^= k.v[i];
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h ^ k.len);
}

Closure::Closure(std::span<const Assertion> context) { assume(context); }

Closure::Prepared Closure::prepare(const Assertion& assertion) {
  if (assertion.fact.depth() > kMaxDelegationDepth) {
    throw Error(Errc::kInvalidArgument, "delegation too deep in: " + to_string(assertion));
  }
  if (is_variable(assertion.issuer)) {
    throw Error(Errc::kInvalidArgument, "variable issuer in: " + to_string(assertion));
  }
  Prepared out;
  out.source_ = assertion;
  std::vector<const std::string*> names{&assertion.issuer};
  collect_principals(assertion.fact, names);
  for (const auto* n : names) out.principals_.push_back(intern(*n));
  std::vector<std::string> vars;
  collect_variables(assertion.fact, vars);
  out.ground_ = vars.empty();
  if (out.ground_) {
    out.key_.push(intern(assertion.issuer));
    encode(assertion.fact, vars, {}, out.key_, /*intern_new=*/true);
  }
  return out;
}

Closure::PreparedQuery Closure::prepare(const Query& query) {
  if (std::holds_alternative<CanSay>(query.fact.form) || !query.fact.is_ground() ||
      is_variable(query.issuer)) {
    throw Error(Errc::kInvalidArgument, "query must be a ground Can or CanActAs fact");
  }
  PreparedQuery out;
  out.key_.push(intern(query.issuer));
  encode(query.fact, {}, {}, out.key_, /*intern_new=*/true);
  return out;
}

void Closure::assume(std::span<const Assertion> assertions) {
  if (stated_ + assertions.size() > kMaxContextSize) {
    throw Error(Errc::kInvalidArgument,
                "context holds " + std::to_string(stated_ + assertions.size()) +
                    " assertions, limit is " + std::to_string(kMaxContextSize));
  }
  std::vector<Prepared> batch;
  batch.reserve(assertions.size());
  for (const auto& a : assertions) batch.push_back(prepare(a));
  assume_all(batch);
}

void Closure::assume(const Prepared& assertion) {
  if (stated_ + 1 > kMaxContextSize) {
    throw Error(Errc::kInvalidArgument,
                "context limit of " + std::to_string(kMaxContextSize) + " reached");
  }
  assume_all(std::span<const Prepared>(&assertion, 1));
}

void Closure::assume_all(std::span<const Prepared> batch) {
  bool new_principal = false;
  for (const auto& p : batch) {
    for (std::uint32_t id : p.principals_) {
      if (id >= is_principal_.size()) is_principal_.resize(names_.size(), 0);
      if (!is_principal_[id]) {
        is_principal_[id] = 1;
        principals_.push_back(id);
        new_principal = true;
      }
    }
  }
  const std::size_t old_patterns = patterns_.size();
  for (const auto& p : batch) {
    ++stated_;
    if (p.ground_) {
      add(p.key_, {Rule::kStated, -1, -1});
    } else {
      patterns_.push_back(p.source_);
    }
  }
  // A new principal widens the grounding of every earlier pattern too.
  for (std::size_t i = new_principal ? 0 : old_patterns; i < patterns_.size(); ++i) ground(i);
  saturate();
}

Closure::Mark Closure::mark() const {
  return {facts_.size(), patterns_.size(), principals_.size(), stated_};
}

void Closure::rollback(const Mark& m) {
  for (std::size_t f = facts_.size(); f > m.facts; --f) {
    auto fact = static_cast<std::uint32_t>(f - 1);
    if (fact < processed_) unprocess(fact);
    index_.erase(facts_[fact]);
  }
  facts_.resize(m.facts);
  why_.resize(m.facts);
  processed_ = std::min(processed_, m.facts);
  patterns_.resize(m.patterns);
  for (std::size_t i = m.principals; i < principals_.size(); ++i) {
    is_principal_[principals_[i]] = 0;
  }
  principals_.resize(m.principals);
  stated_ = m.stated;
}

std::uint32_t Closure::intern(const std::string& name) {
  auto [it, inserted] = ids_.try_emplace(name, static_cast<std::uint32_t>(names_.size()));
  if (inserted) names_.push_back(name);
  return it->second;
}

bool Closure::lookup(const std::string& name, std::uint32_t& id) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return false;
  id = it->second;
  return true;
}

bool Closure::encode(const Fact& fact, const std::vector<std::string>& vars,
                     const std::vector<std::uint32_t>& values, Key& key, bool intern_new) {
  auto symbol = [&](const std::string& name, std::uint32_t& out) {
    if (is_variable(name)) {
      auto pos = std::find(vars.begin(), vars.end(), name) - vars.begin();
      if (static_cast<std::size_t>(pos) >= values.size()) return false;
      out = values[static_cast<std::size_t>(pos)];
      return true;
    }
    if (intern_new) {
      out = intern(name);
      return true;
    }
    return lookup(name, out);
  };
  const Fact* f = &fact;
  while (true) {
    std::uint32_t a = 0, b = 0, c = 0;
    if (const auto* say = std::get_if<CanSay>(&f->form)) {
      if (!symbol(say->delegate, a)) return false;
      key.push(kTagCanSay);
      key.push(a);
      f = say->inner.get();
      continue;
    }
    if (const auto* can = std::get_if<Can>(&f->form)) {
      if (!symbol(can->subject, a)) return false;
      if (intern_new) {
        b = intern(can->action);
        c = intern(can->resource);
      } else if (!lookup(can->action, b) || !lookup(can->resource, c)) {
        return false;
      }
      key.push(kTagCan);
      key.push(a);
      key.push(b);
      key.push(c);
      return true;
    }
    const auto& act = std::get<CanActAs>(f->form);
    if (!symbol(act.subject, a) || !symbol(act.target, b)) return false;
    key.push(kTagCanActAs);
    key.push(a);
    key.push(b);
    return true;
  }
}

void Closure::ground(std::size_t pattern) {
  const Assertion& assertion = patterns_[pattern];
  std::vector<std::string> vars;
  collect_variables(assertion.fact, vars);
  std::vector<std::size_t> odometer(vars.size(), 0);
  std::vector<std::uint32_t> values(vars.size());
  const std::uint32_t issuer = intern(assertion.issuer);
  while (true) {
    for (std::size_t i = 0; i < vars.size(); ++i) values[i] = principals_[odometer[i]];
    Key key;
    key.push(issuer);
    encode(assertion.fact, vars, values, key, /*intern_new=*/true);
    add(key, {Rule::kStated, static_cast<std::int32_t>(pattern), -1});
    std::size_t i = 0;
    while (i < odometer.size() && ++odometer[i] == principals_.size()) odometer[i++] = 0;
    if (i == odometer.size()) break;
  }
}

void Closure::add(const Key& key, Justification why) {
  auto [it, inserted] = index_.try_emplace(key, static_cast<std::uint32_t>(facts_.size()));
  if (!inserted) return;
  facts_.push_back(key);
  why_.push_back(why);
}

void Closure::saturate() {
  for (std::size_t i = processed_; i < facts_.size(); processed_ = ++i) {
    const Key k = facts_[i];
    const auto self = static_cast<std::uint32_t>(i);
    const std::uint32_t issuer = k.v[0];

    // k as the delegated statement some earlier delegation waits for.
    if (auto w = waiting_.find(k); w != waiting_.end()) {
      for (std::uint32_t d : w->second) {
        Key out;
        out.push(facts_[d].v[0]);
        for (std::uint8_t p = 1; p < k.len; ++p) out.push(k.v[p]);
        add(out, {Rule::kDelegation, static_cast<std::int32_t>(d), static_cast<std::int32_t>(i)});
      }
    }

    switch (k.v[1]) {
      case kTagCanSay: {
        Key wanted;  // delegate says inner
        wanted.push(k.v[2]);
        for (std::uint8_t p = 3; p < k.len; ++p) wanted.push(k.v[p]);
        waiting_[wanted].push_back(self);
        if (auto found = index_.find(wanted); found != index_.end()) {
          Key out;
          out.push(issuer);
          for (std::uint8_t p = 3; p < k.len; ++p) out.push(k.v[p]);
          add(out, {Rule::kDelegation, static_cast<std::int32_t>(i),
                    static_cast<std::int32_t>(found->second)});
        }
        break;
      }
      case kTagCanActAs: {
        const std::uint32_t alias = k.v[2];
        const std::uint32_t target = k.v[3];
        const std::uint64_t slot = pair_key(issuer, target);
        aliases_[slot].push_back({alias, self});
        if (auto g = grants_.find(slot); g != grants_.end()) {
          // Copy: add() may grow grants_ while we iterate.
          const std::vector<Grant> grants = g->second;
          for (const auto& grant : grants) {
            Key out;
            out.push(issuer);
            out.push(kTagCan);
            out.push(alias);
            out.push(grant.action);
            out.push(grant.resource);
            add(out, {Rule::kAlias, static_cast<std::int32_t>(i),
                      static_cast<std::int32_t>(grant.fact)});
          }
        }
        break;
      }
      case kTagCan: {
        const std::uint64_t slot = pair_key(issuer, k.v[2]);
        grants_[slot].push_back({k.v[3], k.v[4], self});
        if (auto a = aliases_.find(slot); a != aliases_.end()) {
          const std::vector<Alias> aliases = a->second;
          for (const auto& alias : aliases) {
            Key out;
            out.push(issuer);
            out.push(kTagCan);
            out.push(alias.subject);
            out.push(k.v[3]);
            out.push(k.v[4]);
            add(out, {Rule::kAlias, static_cast<std::int32_t>(alias.fact),
                      static_cast<std::int32_t>(i)});
          }
        }
        break;
      }
      default:
        break;
    }
  }
}

void Closure::unprocess(std::uint32_t fact) {
  // Processing appended to the back of each partner list, and facts are
  // unprocessed newest first, so every removal is a pop_back.
  const Key& k = facts_[fact];
  const std::uint32_t issuer = k.v[0];
  switch (k.v[1]) {
    case kTagCanSay: {
      Key wanted;
      wanted.push(k.v[2]);
      for (std::uint8_t p = 3; p < k.len; ++p) wanted.push(k.v[p]);
      waiting_[wanted].pop_back();
      break;
    }
    case kTagCanActAs:
      aliases_[pair_key(issuer, k.v[3])].pop_back();
      break;
    case kTagCan:
      grants_[pair_key(issuer, k.v[2])].pop_back();
      break;
    default:
      break;
  }
}

Fact Closure::decode_fact(const Key& key, std::size_t& pos) const {
  std::uint32_t tag = key.v[pos++];
  if (tag == kTagCanSay) {
    std::string delegate = names_[key.v[pos++]];
    return Fact::can_say(std::move(delegate), decode_fact(key, pos));
  }
  if (tag == kTagCanActAs) {
    std::string subject = names_[key.v[pos++]];
    return Fact::can_act_as(std::move(subject), names_[key.v[pos++]]);
  }
  std::string subject = names_[key.v[pos++]];
  std::string action = names_[key.v[pos++]];
  return Fact::can(std::move(subject), std::move(action), names_[key.v[pos++]]);
}

Assertion Closure::decode(const Key& key) const {
  std::size_t pos = 1;
  return {names_[key.v[0]], decode_fact(key, pos)};
}

std::vector<Assertion> Closure::facts() const {
  std::vector<Assertion> out;
  out.reserve(facts_.size());
  for (const auto& k : facts_) out.push_back(decode(k));
  return out;
}

bool Closure::find_query(const Query& query, std::uint32_t& index) const {
  if (std::holds_alternative<CanSay>(query.fact.form) || !query.fact.is_ground() ||
      is_variable(query.issuer)) {
    throw Error(Errc::kInvalidArgument, "query must be a ground Can or CanActAs fact");
  }
  if (facts_.empty()) return false;
  Key key;
  std::uint32_t issuer = 0;
  if (!lookup(query.issuer, issuer)) return false;
  key.push(issuer);
  if (!const_cast<Closure*>(this)->encode(query.fact, {}, {}, key, /*intern_new=*/false)) {
    return false;
  }
  auto it = index_.find(key);
  if (it == index_.end()) return false;
  index = it->second;
  return true;
}

bool Closure::holds(const Query& query) const {
  std::uint32_t index = 0;
  return find_query(query, index);
}

Decision Closure::decide(const Query& query) const {
  Decision decision;
  std::uint32_t root = 0;
  if (!find_query(query, root)) return decision;
  decision.outcome = Outcome::kPermit;

  // Iterative post-order over the justification graph.
  std::vector<char> emitted(facts_.size(), 0);
  std::vector<std::pair<std::uint32_t, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [fact, expanded] = stack.back();
    stack.pop_back();
    if (emitted[fact]) continue;
    const Justification& why = why_[fact];
    if (!expanded && why.rule != Rule::kStated) {
      stack.push_back({fact, true});
      stack.push_back({static_cast<std::uint32_t>(why.second), false});
      stack.push_back({static_cast<std::uint32_t>(why.first), false});
      continue;
    }
    emitted[fact] = 1;
    ProofStep step{why.rule, {}, decode(facts_[fact])};
    if (why.rule == Rule::kStated) {
      step.premises.push_back(why.first >= 0 ? patterns_[static_cast<std::size_t>(why.first)]
                                             : step.conclusion);
    } else {
      step.premises.push_back(decode(facts_[static_cast<std::size_t>(why.first)]));
      step.premises.push_back(decode(facts_[static_cast<std::size_t>(why.second)]));
    }
    decision.proof.push_back(std::move(step));
  }
  return decision;
}

Decision derive(std::span<const Assertion> context, const Query& query) {
  return Closure(context).decide(query);
}

namespace {

using Bindings = std::vector<std::pair<std::string, std::string>>;

bool bind(Bindings& b, const std::string& pattern, const std::string& value) {
  if (!is_variable(pattern)) return pattern == value;
  for (const auto& [var, val] : b) {
    if (var == pattern) return val == value;
  }
  b.emplace_back(pattern, value);
  return true;
}

// True iff 'ground' is 'pattern' with its variables replaced consistently.
bool instance_of(const Fact& ground, const Fact& pattern, Bindings& b) {
  if (ground.form.index() != pattern.form.index()) return false;
  if (const auto* g = std::get_if<Can>(&ground.form)) {
    const auto& p = std::get<Can>(pattern.form);
    return bind(b, p.subject, g->subject) && g->action == p.action && g->resource == p.resource;
  }
  if (const auto* g = std::get_if<CanActAs>(&ground.form)) {
    const auto& p = std::get<CanActAs>(pattern.form);
    return bind(b, p.subject, g->subject) && bind(b, p.target, g->target);
  }
  const auto& g = std::get<CanSay>(ground.form);
  const auto& p = std::get<CanSay>(pattern.form);
  return bind(b, p.delegate, g.delegate) && instance_of(*g.inner, *p.inner, b);
}

}  // namespace

bool check_proof(std::span<const Assertion> context, const Query& query,
                 const Decision& decision) {
  if (!decision.permitted()) return decision.proof.empty();
  if (decision.proof.empty()) return false;
  std::vector<Assertion> established;
  auto known = [&](const Assertion& a) {
    return std::find(established.begin(), established.end(), a) != established.end();
  };
  for (const auto& step : decision.proof) {
    if (!step.conclusion.fact.is_ground()) return false;
    switch (step.rule) {
      case Rule::kStated: {
        if (step.premises.size() != 1) return false;
        const Assertion& stated = step.premises[0];
        if (std::find(context.begin(), context.end(), stated) == context.end()) return false;
        Bindings b;
        if (stated.issuer != step.conclusion.issuer ||
            !instance_of(step.conclusion.fact, stated.fact, b)) {
          return false;
        }
        break;
      }
      case Rule::kDelegation: {
        if (step.premises.size() != 2 || !known(step.premises[0]) || !known(step.premises[1])) {
          return false;
        }
        const auto* say = std::get_if<CanSay>(&step.premises[0].fact.form);
        if (!say) return false;
        const Assertion& spoken = step.premises[1];
        if (spoken.issuer != say->delegate || !(spoken.fact == *say->inner)) return false;
        if (step.conclusion.issuer != step.premises[0].issuer ||
            !(step.conclusion.fact == *say->inner)) {
          return false;
        }
        break;
      }
      case Rule::kAlias: {
        if (step.premises.size() != 2 || !known(step.premises[0]) || !known(step.premises[1])) {
          return false;
        }
        const auto* act = std::get_if<CanActAs>(&step.premises[0].fact.form);
        const auto* grant = std::get_if<Can>(&step.premises[1].fact.form);
        const auto* concl = std::get_if<Can>(&step.conclusion.fact.form);
        if (!act || !grant || !concl) return false;
        const std::string& issuer = step.premises[0].issuer;
        if (step.premises[1].issuer != issuer || step.conclusion.issuer != issuer) return false;
        if (grant->subject != act->target || concl->subject != act->subject ||
            concl->action != grant->action || concl->resource != grant->resource) {
          return false;
        }
        break;
      }
    }
    established.push_back(step.conclusion);
  }
  return known(query.as_assertion());
}

}  // namespace govgw::policy
