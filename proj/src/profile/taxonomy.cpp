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
#include "govgw/profile/taxonomy.hpp"

#include "govgw/common/error.hpp"
#include "govgw/common/json_util.hpp"

namespace govgw::profile {

using nlohmann::json;

Taxonomy Taxonomy::builtin() {
  Taxonomy t;
  for (const char* c : {"identity-management", "access-control", "audit", "transport",
                        "transformation"}) {
    t.add_category(c);
  }
  t.add_mechanism("identity-management", "http-basic");
  t.add_mechanism("identity-management", "xml-token", {"schema_ref"});
  t.add_mechanism("identity-management", "token-secpal");
  t.add_mechanism("access-control", "secpal-pdp");
  t.add_mechanism("audit", "audit-log");
  t.add_mechanism("transformation", "identity-transform");
  t.add_rule({"access-control", DependencyKind::kRequiresCategory, "identity-management"});
  t.add_rule({"transformation", DependencyKind::kRequiresOtherCategory, ""});
  return t;
}

void Taxonomy::add_category(const std::string& category) {
  categories_.insert(category);
}

void Taxonomy::add_mechanism(const std::string& category, const std::string& mechanism,
                             std::set<std::string> required_attributes) {
  if (!has_category(category)) {
    throw Error(Errc::kInvalidTaxonomyRef, "unknown category '" + category + "'");
  }
  auto it = mechanism_category_.find(mechanism);
  if (it != mechanism_category_.end() && it->second != category) {
    throw Error(Errc::kInvalidTaxonomyRef, "mechanism '" + mechanism +
                                               "' already belongs to category '" +
                                               it->second + "'");
  }
  mechanism_category_[mechanism] = category;
  required_[{category, mechanism}] = std::move(required_attributes);
}

void Taxonomy::add_rule(DependencyRule rule) {
  if (!has_category(rule.category) ||
      (rule.kind == DependencyKind::kRequiresCategory && !has_category(rule.required))) {
    throw Error(Errc::kInvalidTaxonomyRef, "dependency rule names an unknown category");
  }
  rules_.push_back(std::move(rule));
}

bool Taxonomy::has_category(const std::string& category) const {
  return categories_.count(category) != 0;
}

bool Taxonomy::has_mechanism(const std::string& mechanism) const {
  return mechanism_category_.count(mechanism) != 0;
}

std::optional<std::string> Taxonomy::category_of(const std::string& mechanism) const {
  auto it = mechanism_category_.find(mechanism);
  if (it == mechanism_category_.end()) return std::nullopt;
  return it->second;
}

std::set<std::string> Taxonomy::mechanisms(const std::string& category) const {
  std::set<std::string> out;
  for (const auto& [mech, cat] : mechanism_category_) {
    if (cat == category) out.insert(mech);
  }
  return out;
}

const std::set<std::string>& Taxonomy::required_attributes(const std::string& category,
                                                           const std::string& mechanism) const {
  static const std::set<std::string> kNone;
  auto it = required_.find({category, mechanism});
  return it == required_.end() ? kNone : it->second;
}

// {"categories": {cat: {mech: [required attrs]}}, "rules": [...]}
Taxonomy Taxonomy::from_json(const json& j) {
  namespace ju = json_util;
  ju::require_object(j, "taxonomy");
  ju::reject_unknown_fields(j, {"categories", "rules"}, "taxonomy");
  Taxonomy t;
  const json& cats = ju::require_field(j, "categories", "taxonomy");
  ju::require_object(cats, "taxonomy.categories");
  for (const auto& [cat, mechs] : cats.items()) t.add_category(cat);
  for (const auto& [cat, mechs] : cats.items()) {
    ju::require_object(mechs, "taxonomy.categories." + cat);
    for (const auto& [mech, attrs] : mechs.items()) {
      auto list = ju::string_list(attrs, "taxonomy.categories." + cat + "." + mech);
      std::set<std::string> unique(list.begin(), list.end());
      if (unique.size() != list.size()) {
        throw Error(Errc::kMalformedDocument,
                    "duplicate required attribute for mechanism '" + mech + "'");
      }
      t.add_mechanism(cat, mech, std::move(unique));
    }
  }
  if (auto it = j.find("rules"); it != j.end()) {
    if (!it->is_array()) throw Error(Errc::kMalformedDocument, "taxonomy.rules: expected array");
    for (const auto& r : *it) {
      ju::require_object(r, "taxonomy rule");
      ju::reject_unknown_fields(r, {"category", "requires", "requires_other_category"},
                                "taxonomy rule");
      DependencyRule rule;
      rule.category = ju::require_string(r, "category", "taxonomy rule");
      if (r.value("requires_other_category", false)) {
        rule.kind = DependencyKind::kRequiresOtherCategory;
      } else {
        rule.kind = DependencyKind::kRequiresCategory;
        rule.required = ju::require_string(r, "requires", "taxonomy rule");
      }
      t.add_rule(std::move(rule));
    }
  }
  return t;
}

json Taxonomy::to_json() const {
  json cats = json::object();
  for (const auto& c : categories_) cats[c] = json::object();
  for (const auto& [mech, cat] : mechanism_category_) {
    cats[cat][mech] = required_attributes(cat, mech);
  }
  json rules = json::array();
  for (const auto& r : rules_) {
    if (r.kind == DependencyKind::kRequiresOtherCategory) {
      rules.push_back({{"category", r.category}, {"requires_other_category", true}});
    } else {
      rules.push_back({{"category", r.category}, {"requires", r.required}});
    }
  }
  return {{"categories", cats}, {"rules", rules}};
}

}  // namespace govgw::profile
