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
#ifndef GOVGW_CAPABILITY_AUDIT_HPP_
#define GOVGW_CAPABILITY_AUDIT_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "govgw/capability/codec.hpp"
#include "govgw/common/time.hpp"

namespace govgw::capability {

struct AuditRecord {
  std::string profile_id;
  std::uint64_t seq = 0;
  std::string timestamp;
  std::string instance_id;
  std::string action;
  std::string outcome;
  std::string detail;
  std::string chain;  // hex

  bool operator==(const AuditRecord&) const = default;
};

// Predecessor of the first record.
inline const std::string kGenesisChain(64, '0');

// Sorted-key JSON of every field but chain, then a newline.
std::string canonical_entry_bytes(const AuditRecord& record);
// hex(H(previous ∥ canonical_entry_bytes(record)))
std::string chain_value(HashAlg alg, const std::string& previous, const AuditRecord& record);

nlohmann::json record_json(const AuditRecord& record);
AuditRecord record_from_json(const nlohmann::json& j);

struct ChainCheck {
  bool ok = true;
  std::optional<std::uint64_t> bad_seq;
  std::string reason;
};

// Recomputes every link. The algorithm of each record is read off the
// length of its stored chain value (64 hex: sha-256, 128 hex: sha-512), so
// logs that changed algorithm midway verify too. 'previous' is the chain of
// the record just before the first one given.
ChainCheck verify_chain(const std::vector<AuditRecord>& records,
                        const std::string& previous = kGenesisChain,
                        std::uint64_t first_seq = 1);

// Same over the JSON-lines file form; every line must also be the exact
// canonical rendering of its record.
ChainCheck verify_jsonl(const std::string& text);

// Append-only hash-chained log for one profile. When a path is given every
// record is appended to it as one JSON line.
class AuditTrail {
 public:
  AuditTrail(std::string profile_id, std::optional<std::string> path = std::nullopt,
             Clock clock = system_clock());

  // Throws kStorageFailure when the line cannot be written; the record is
  // then not part of the trail either.
  AuditRecord append(const std::string& instance_id, const std::string& action,
                     const std::string& outcome, const std::string& detail, HashAlg alg);

  // Records with from <= seq <= to, in seq order. Ranges past the end are
  // truncated.
  std::vector<AuditRecord> records(std::uint64_t from = 1,
                                   std::uint64_t to = UINT64_MAX) const;
  std::size_t size() const;
  const std::string& profile_id() const { return profile_id_; }
  const std::optional<std::string>& path() const { return path_; }

 private:
  void load();

  const std::string profile_id_;
  const std::optional<std::string> path_;
  Clock clock_;
  mutable std::mutex mu_;
  std::vector<AuditRecord> records_;
};

// One trail per profile, created on first use.
class AuditStore {
 public:
  explicit AuditStore(std::optional<std::string> directory = std::nullopt,
                      Clock clock = system_clock());

  std::shared_ptr<AuditTrail> trail(const std::string& profile_id);
  // Existing trail only; a persisted file counts as existing.
  std::shared_ptr<AuditTrail> find(const std::string& profile_id) const;
  std::optional<std::string> file_for(const std::string& profile_id) const;

 private:
  std::optional<std::string> directory_;
  Clock clock_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::shared_ptr<AuditTrail>> trails_;
};

}  // namespace govgw::capability

#endif  // GOVGW_CAPABILITY_AUDIT_HPP_
