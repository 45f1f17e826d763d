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
#ifndef GOVGW_POLICY_TEMPLATE_HPP_
#define GOVGW_POLICY_TEMPLATE_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace govgw::policy {

// A policy body with ${key} placeholders. Keys use [A-Za-z0-9_.-]; the
// sequence $${ stands for a literal ${.
class PolicyTemplate {
 public:
  // Throws kTemplateSyntax on an unterminated or empty placeholder.
  PolicyTemplate(std::string id, std::string grammar, std::string body);

  const std::string& id() const { return id_; }
  const std::string& grammar() const { return grammar_; }
  const std::string& body() const { return body_; }
  const std::set<std::string>& required_keys() const { return required_keys_; }

 private:
  struct Piece {
    bool placeholder;
    std::string text;
  };

  std::string id_;
  std::string grammar_;
  std::string body_;
  std::set<std::string> required_keys_;
  std::vector<Piece> pieces_;

  friend struct Instantiation instantiate_template(const PolicyTemplate&,
                                                   const std::map<std::string, std::string>&);
};

struct ConcretePolicy {
  std::string grammar;
  std::string body;
  std::string source_template;

  bool operator==(const ConcretePolicy&) const = default;
};

struct Instantiation {
  ConcretePolicy policy;
  // Binding keys the template never mentions; reported, never fatal.
  std::vector<std::string> unused_bindings;
};

// Throws kMissingBinding naming the first absent key.
Instantiation instantiate_template(const PolicyTemplate& tmpl,
                                   const std::map<std::string, std::string>& bindings);

nlohmann::json policy_json(const ConcretePolicy& policy);
ConcretePolicy policy_from_json(const nlohmann::json& j);

// Named templates available to profiles through policy_template_ref.
class TemplateLibrary {
 public:
  void add(PolicyTemplate tmpl);
  bool contains(const std::string& id) const;
  // Throws kUnknownTemplate.
  const PolicyTemplate& get(const std::string& id) const;
  std::vector<std::string> ids() const;

  // {"<id>": {"grammar": "...", "body": "..."}, ...}
  static TemplateLibrary from_json(const nlohmann::json& j);

 private:
  std::map<std::string, PolicyTemplate> templates_;
};

}  // namespace govgw::policy

#endif  // GOVGW_POLICY_TEMPLATE_HPP_
