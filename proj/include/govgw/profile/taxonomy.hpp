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
#ifndef GOVGW_PROFILE_TAXONOMY_HPP_
#define GOVGW_PROFILE_TAXONOMY_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace govgw::profile {

// Prerequisite a category imposes on the rest of a profile.
enum class DependencyKind {
  kRequiresCategory,       // some requirement of category 'required' must exist
  kRequiresOtherCategory,  // at least one requirement of a different category must exist
};

struct DependencyRule {
  std::string category;
  DependencyKind kind = DependencyKind::kRequiresCategory;
  std::string required;  // only meaningful for kRequiresCategory

  bool operator==(const DependencyRule&) const = default;
};

// Closed-world description of the security capabilities a profile may ask
// for. Each mechanism belongs to exactly one category.
class Taxonomy {
 public:
  // Categories identity-management, access-control, audit, transport and
  // transformation with the mechanisms used by the music store scenario.
  static Taxonomy builtin();
  static Taxonomy from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  void add_category(const std::string& category);
  // Throws kInvalidTaxonomyRef if the category is unknown or the mechanism
  // is already registered under another category.
  void add_mechanism(const std::string& category, const std::string& mechanism,
                     std::set<std::string> required_attributes = {});
  void add_rule(DependencyRule rule);

  bool has_category(const std::string& category) const;
  bool has_mechanism(const std::string& mechanism) const;
  std::optional<std::string> category_of(const std::string& mechanism) const;
  const std::set<std::string>& categories() const { return categories_; }
  std::set<std::string> mechanisms(const std::string& category) const;
  const std::set<std::string>& required_attributes(const std::string& category,
                                                   const std::string& mechanism) const;
  const std::vector<DependencyRule>& rules() const { return rules_; }

 private:
  std::set<std::string> categories_;
  std::map<std::string, std::string> mechanism_category_;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> required_;
  std::vector<DependencyRule> rules_;
};

}  // namespace govgw::profile

#endif  // GOVGW_PROFILE_TAXONOMY_HPP_
