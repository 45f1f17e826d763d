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
#include "govgw/common/json_util.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "govgw/common/error.hpp"

namespace govgw::json_util {

void require_object(const json& j, std::string_view where) {
  if (!j.is_object()) {
    throw Error(Errc::kMalformedDocument, std::string(where) + ": expected an object");
  }
}

void reject_unknown_fields(const json& j, std::initializer_list<std::string_view> allowed,
                           std::string_view where) {
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(Errc::kUnknownField, std::string(where) + ": unknown field '" + key + "'");
    }
  }
}

const json& require_field(const json& j, std::string_view key, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(Errc::kMissingField,
                std::string(where) + ": missing field '" + std::string(key) + "'");
  }
  return *it;
}

std::string require_string(const json& j, std::string_view key, std::string_view where) {
  const json& v = require_field(j, key, where);
  if (!v.is_string()) {
    throw Error(Errc::kMalformedDocument,
                std::string(where) + ": field '" + std::string(key) + "' must be a string");
  }
  return v.get<std::string>();
}

std::string optional_string(const json& j, std::string_view key, std::string_view where,
                            std::string fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_string()) {
    throw Error(Errc::kMalformedDocument,
                std::string(where) + ": field '" + std::string(key) + "' must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> string_list(const json& j, std::string_view where) {
  if (!j.is_array()) {
    throw Error(Errc::kMalformedDocument, std::string(where) + ": expected an array");
  }
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) {
      throw Error(Errc::kMalformedDocument, std::string(where) + ": expected strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::map<std::string, std::string> string_map(const json& j, std::string_view where) {
  require_object(j, where);
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) {
      throw Error(Errc::kMalformedDocument,
                  std::string(where) + ": value of '" + key + "' must be a string");
    }
    out.emplace(key, value.get<std::string>());
  }
  return out;
}

json parse_or_throw(std::string_view bytes, std::string_view where) {
  json j = json::parse(bytes.begin(), bytes.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw Error(Errc::kMalformedDocument, std::string(where) + ": not well-formed JSON");
  }
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoError, "cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::kIoError, "short write to " + path);
}

}  // namespace govgw::json_util
