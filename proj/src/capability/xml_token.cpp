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
#include "govgw/capability/xml_token.hpp"

#include "govgw/common/error.hpp"
#include "govgw/common/time.hpp"

namespace govgw::capability {

namespace {

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view text) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '<') throw Error(Errc::kSchemaViolation, "unexpected markup in text");
    if (text[i] != '&') {
      out += text[i++];
      continue;
    }
    bool known = false;
    for (const auto& [entity, c] : kEntities) {
      if (text.compare(i, entity.size(), entity) == 0) {
        out += c;
        i += entity.size();
        known = true;
        break;
      }
    }
    if (!known) throw Error(Errc::kSchemaViolation, "unknown entity");
  }
  return out;
}

const std::string& open_tag() {
  static const std::string tag = "<token xmlns=\"" + std::string(kTokenNamespace) + "\">";
  return tag;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  void literal(std::string_view expected, const char* what) {
    if (text_.compare(pos_, expected.size(), expected) != 0) {
      throw Error(Errc::kSchemaViolation, std::string("expected ") + what);
    }
    pos_ += expected.size();
  }

  std::string element(const std::string& name) {
    literal("<" + name + ">", ("<" + name + ">").c_str());
    std::string close = "</" + name + ">";
    std::size_t end = text_.find(close, pos_);
    if (end == std::string_view::npos) {
      throw Error(Errc::kSchemaViolation, "missing " + close);
    }
    std::string value = unescape(text_.substr(pos_, end - pos_));
    pos_ = end + close.size();
    return value;
  }

  bool done() const { return pos_ == text_.size(); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string render_token(const XmlToken& token) {
  return open_tag() + "<login>" + escape(token.login) + "</login><password>" +
         escape(token.password) + "</password><issued>" + escape(token.issued) +
         "</issued></token>";
}

XmlToken parse_token(std::string_view text) {
  Reader r(text);
  r.literal(open_tag(), "<token> root in the token namespace");
  XmlToken t;
  t.login = r.element("login");
  t.password = r.element("password");
  t.issued = r.element("issued");
  r.literal("</token>", "</token>");
  if (!r.done()) throw Error(Errc::kSchemaViolation, "trailing content after </token>");
  try {
    parse_iso8601(t.issued);
  } catch (const Error&) {
    throw Error(Errc::kSchemaViolation, "issued is not an ISO-8601 UTC timestamp");
  }
  return t;
}

std::size_t token_prefix_length(std::string_view text) {
  if (text.substr(0, open_tag().size()) != open_tag()) return 0;
  std::size_t end = text.find("</token>");
  return end == std::string_view::npos ? 0 : end + 8;
}

}  // namespace govgw::capability
