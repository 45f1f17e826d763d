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
#include "govgw/policy/template.hpp"

#include "govgw/common/error.hpp"
#include "govgw/common/json_util.hpp"

namespace govgw::policy {

namespace {

bool is_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '.' || c == '-';
}

}  // namespace

PolicyTemplate::PolicyTemplate(std::string id, std::string grammar, std::string body)
    : id_(std::move(id)), grammar_(std::move(grammar)), body_(std::move(body)) {
  std::string literal;
  std::size_t i = 0;
  while (i < body_.size()) {
    if (body_.compare(i, 3, "$${") == 0) {
      literal += "${";
      i += 3;
      continue;
    }
    if (body_.compare(i, 2, "${") == 0) {
      std::size_t close = body_.find('}', i + 2);
      if (close == std::string::npos) {
        throw Error(Errc::kTemplateSyntax,
                    "unterminated placeholder at offset " + std::to_string(i));
      }
      std::string key = body_.substr(i + 2, close - i - 2);
      if (key.empty()) {
        throw Error(Errc::kTemplateSyntax, "empty placeholder at offset " + std::to_string(i));
      }
      for (char c : key) {
        if (!is_key_char(c)) {
          throw Error(Errc::kTemplateSyntax,
                      "bad character in placeholder at offset " + std::to_string(i));
        }
      }
      if (!literal.empty()) pieces_.push_back({false, std::move(literal)});
      literal.clear();
      required_keys_.insert(key);
      pieces_.push_back({true, std::move(key)});
      i = close + 1;
      continue;
    }
    literal += body_[i++];
  }
  if (!literal.empty()) pieces_.push_back({false, std::move(literal)});
}

Instantiation instantiate_template(const PolicyTemplate& tmpl,
                                   const std::map<std::string, std::string>& bindings) {
  for (const auto& key : tmpl.required_keys()) {
    if (!bindings.count(key)) throw Error(Errc::kMissingBinding, key);
  }
  Instantiation out;
  out.policy.grammar = tmpl.grammar();
  out.policy.source_template = tmpl.id();
  for (const auto& piece : tmpl.pieces_) {
    out.policy.body += piece.placeholder ? bindings.at(piece.text) : piece.text;
  }
  for (const auto& [key, value] : bindings) {
    if (!tmpl.required_keys().count(key)) out.unused_bindings.push_back(key);
  }
  return out;
}

nlohmann::json policy_json(const ConcretePolicy& policy) {
  return {{"grammar", policy.grammar},
          {"body", policy.body},
          {"source_template", policy.source_template}};
}

ConcretePolicy policy_from_json(const nlohmann::json& j) {
  json_util::require_object(j, "policy");
  json_util::reject_unknown_fields(j, {"grammar", "body", "source_template"}, "policy");
  return {json_util::require_string(j, "grammar", "policy"),
          json_util::require_string(j, "body", "policy"),
          json_util::optional_string(j, "source_template", "policy")};
}

void TemplateLibrary::add(PolicyTemplate tmpl) {
  std::string id = tmpl.id();
  if (templates_.count(id)) throw Error(Errc::kDuplicateId, "template " + id);
  templates_.emplace(std::move(id), std::move(tmpl));
}

bool TemplateLibrary::contains(const std::string& id) const { return templates_.count(id) > 0; }

const PolicyTemplate& TemplateLibrary::get(const std::string& id) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) throw Error(Errc::kUnknownTemplate, id);
  return it->second;
}

std::vector<std::string> TemplateLibrary::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, t] : templates_) out.push_back(id);
  return out;
}

TemplateLibrary TemplateLibrary::from_json(const nlohmann::json& j) {
  json_util::require_object(j, "templates");
  TemplateLibrary lib;
  for (const auto& [id, entry] : j.items()) {
    json_util::require_object(entry, "template " + id);
    json_util::reject_unknown_fields(entry, {"grammar", "body"}, "template " + id);
    lib.add(PolicyTemplate(id, json_util::require_string(entry, "grammar", id),
                           json_util::require_string(entry, "body", id)));
  }
  return lib;
}

}  // namespace govgw::policy
