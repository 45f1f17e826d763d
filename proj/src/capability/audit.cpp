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
#include "govgw/capability/audit.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "govgw/common/error.hpp"
#include "govgw/common/json_util.hpp"

namespace govgw::capability {

namespace {

nlohmann::json entry_json(const AuditRecord& r) {
  return {{"action", r.action},         {"detail", r.detail},   {"instance_id", r.instance_id},
          {"outcome", r.outcome},       {"profile_id", r.profile_id}, {"seq", r.seq},
          {"timestamp", r.timestamp}};
}

std::optional<HashAlg> alg_of_chain(const std::string& chain) {
  if (chain.size() == hex_digest_size(HashAlg::kSha256)) return HashAlg::kSha256;
  if (chain.size() == hex_digest_size(HashAlg::kSha512)) return HashAlg::kSha512;
  return std::nullopt;
}

}  // namespace

std::string canonical_entry_bytes(const AuditRecord& record) {
  return entry_json(record).dump() + "\n";
}

std::string chain_value(HashAlg alg, const std::string& previous, const AuditRecord& record) {
  return hex_digest(alg, previous + canonical_entry_bytes(record));
}

nlohmann::json record_json(const AuditRecord& record) {
  nlohmann::json j = entry_json(record);
  j["chain"] = record.chain;
  return j;
}

AuditRecord record_from_json(const nlohmann::json& j) {
  using namespace json_util;
  require_object(j, "audit record");
  reject_unknown_fields(j, {"action", "chain", "detail", "instance_id", "outcome", "profile_id",
                            "seq", "timestamp"},
                        "audit record");
  AuditRecord r;
  r.action = require_string(j, "action", "audit record");
  r.chain = require_string(j, "chain", "audit record");
  r.detail = require_string(j, "detail", "audit record");
  r.instance_id = require_string(j, "instance_id", "audit record");
  r.outcome = require_string(j, "outcome", "audit record");
  r.profile_id = require_string(j, "profile_id", "audit record");
  r.timestamp = require_string(j, "timestamp", "audit record");
  const auto& seq = require_field(j, "seq", "audit record");
  if (!seq.is_number_unsigned()) throw Error(Errc::kMalformedDocument, "audit record: seq");
  r.seq = seq.get<std::uint64_t>();
  return r;
}

ChainCheck verify_chain(const std::vector<AuditRecord>& records, const std::string& previous,
                        std::uint64_t first_seq) {
  std::string prev = previous;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const AuditRecord& r = records[i];
    const std::uint64_t expected_seq = first_seq + i;
    if (r.seq != expected_seq) {
      return {false, expected_seq, "sequence gap"};
    }
    auto alg = alg_of_chain(r.chain);
    if (!alg) return {false, expected_seq, "chain value has unknown length"};
    if (chain_value(*alg, prev, r) != r.chain) {
      return {false, expected_seq, "chain mismatch"};
    }
    prev = r.chain;
  }
  return {};
}

ChainCheck verify_jsonl(const std::string& text) {
  std::vector<AuditRecord> records;
  std::istringstream in(text);
  std::string line;
  std::uint64_t seq = 0;
  std::string prev = kGenesisChain;
  while (std::getline(in, line)) {
    ++seq;
    AuditRecord r;
    try {
      r = record_from_json(nlohmann::json::parse(line));
    } catch (const std::exception&) {
      return {false, seq, "unreadable line"};
    }
    if (record_json(r).dump() != line) return {false, seq, "non-canonical line"};
    ChainCheck c = verify_chain({r}, prev, seq);
    if (!c.ok) return c;
    prev = r.chain;
  }
  if (!text.empty() && text.back() != '\n') return {false, seq, "truncated final line"};
  return {};
}

AuditTrail::AuditTrail(std::string profile_id, std::optional<std::string> path, Clock clock)
    : profile_id_(std::move(profile_id)), path_(std::move(path)), clock_(std::move(clock)) {
  if (path_) load();
}

void AuditTrail::load() {
  std::ifstream in(*path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) records_.push_back(record_from_json(nlohmann::json::parse(line)));
  }
}

AuditRecord AuditTrail::append(const std::string& instance_id, const std::string& action,
                               const std::string& outcome, const std::string& detail,
                               HashAlg alg) {
  std::lock_guard lock(mu_);
  AuditRecord r;
  r.profile_id = profile_id_;
  r.seq = records_.size() + 1;
  r.timestamp = format_iso8601(clock_());
  r.instance_id = instance_id;
  r.action = action;
  r.outcome = outcome;
  r.detail = detail;
  r.chain = chain_value(alg, records_.empty() ? kGenesisChain : records_.back().chain, r);
  if (path_) {
    std::filesystem::path p(*path_);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(*path_, std::ios::app | std::ios::binary);
    out << record_json(r).dump() << '\n';
    out.flush();
    if (!out) throw Error(Errc::kStorageFailure, "cannot append to " + *path_);
  }
  records_.push_back(r);
  return r;
}

std::vector<AuditRecord> AuditTrail::records(std::uint64_t from, std::uint64_t to) const {
  std::lock_guard lock(mu_);
  std::vector<AuditRecord> out;
  if (from == 0) from = 1;
  for (std::uint64_t s = from; s <= to && s <= records_.size(); ++s) out.push_back(records_[s - 1]);
  return out;
}

std::size_t AuditTrail::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

AuditStore::AuditStore(std::optional<std::string> directory, Clock clock)
    : directory_(std::move(directory)), clock_(std::move(clock)) {}

std::optional<std::string> AuditStore::file_for(const std::string& profile_id) const {
  if (!directory_) return std::nullopt;
  return (std::filesystem::path(*directory_) / (profile_id + ".audit.jsonl")).string();
}

std::shared_ptr<AuditTrail> AuditStore::trail(const std::string& profile_id) {
  std::lock_guard lock(mu_);
  auto& t = trails_[profile_id];
  if (!t) t = std::make_shared<AuditTrail>(profile_id, file_for(profile_id), clock_);
  return t;
}

std::shared_ptr<AuditTrail> AuditStore::find(const std::string& profile_id) const {
  std::lock_guard lock(mu_);
  auto it = trails_.find(profile_id);
  if (it != trails_.end()) return it->second;
  auto file = file_for(profile_id);
  if (!file || !std::filesystem::exists(*file)) return nullptr;
  auto t = std::make_shared<AuditTrail>(profile_id, file, clock_);
  trails_.emplace(profile_id, t);
  return t;
}

}  // namespace govgw::capability
