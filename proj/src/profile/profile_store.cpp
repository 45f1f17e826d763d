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
#include "govgw/profile/profile_store.hpp"

#include <filesystem>

#include "govgw/common/error.hpp"
#include "govgw/common/json_util.hpp"
#include "govgw/profile/document.hpp"

namespace govgw::profile {

namespace fs = std::filesystem;
using nlohmann::json;

ProfileStore::ProfileStore(std::optional<std::string> directory)
    : directory_(std::move(directory)) {
  if (directory_) load_directory();
}

void ProfileStore::deposit(const SecurityProfile& profile) {
  std::unique_lock lock(mu_);
  if (entries_.count(profile.profile_id)) {
    throw Error(Errc::kDuplicateProfile, "profile '" + profile.profile_id + "' already deposited");
  }
  auto& entry = entries_[profile.profile_id];
  entry.profile = profile;
  persist(entry);
}

SecurityProfile ProfileStore::get(const std::string& profile_id) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(profile_id);
  if (it == entries_.end()) throw Error(Errc::kUnknownProfile, "no profile '" + profile_id + "'");
  return it->second.profile;
}

bool ProfileStore::contains(const std::string& profile_id) const {
  std::shared_lock lock(mu_);
  return entries_.count(profile_id) != 0;
}

void ProfileStore::put(const SecurityProfile& profile) {
  std::unique_lock lock(mu_);
  auto it = entries_.find(profile.profile_id);
  if (it == entries_.end()) {
    throw Error(Errc::kUnknownProfile, "no profile '" + profile.profile_id + "'");
  }
  it->second.profile = profile;
  persist(it->second);
}

std::vector<std::string> ProfileStore::ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : entries_) out.push_back(id);
  return out;
}

void ProfileStore::set_record(const std::string& profile_id, const std::string& name,
                              json value) {
  std::unique_lock lock(mu_);
  auto it = entries_.find(profile_id);
  if (it == entries_.end()) throw Error(Errc::kUnknownProfile, "no profile '" + profile_id + "'");
  it->second.records[name] = std::move(value);
  persist(it->second);
}

std::optional<json> ProfileStore::record(const std::string& profile_id,
                                         const std::string& name) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(profile_id);
  if (it == entries_.end()) throw Error(Errc::kUnknownProfile, "no profile '" + profile_id + "'");
  auto rec = it->second.records.find(name);
  if (rec == it->second.records.end()) return std::nullopt;
  return rec->second;
}

std::unique_lock<std::mutex> ProfileStore::lock_profile(const std::string& profile_id) {
  std::shared_ptr<std::mutex> writer;
  {
    std::shared_lock lock(mu_);
    auto it = entries_.find(profile_id);
    if (it == entries_.end()) {
      throw Error(Errc::kUnknownProfile, "no profile '" + profile_id + "'");
    }
    writer = it->second.writer;
  }
  // Entries are never erased, so the mutex outlives the lock.
  return std::unique_lock<std::mutex>(*writer);
}

void ProfileStore::persist(const Entry& entry) const {
  if (!directory_) return;
  json j = {{"version", entry.profile.version},
            {"document", document_json(entry.profile)},
            {"records", entry.records}};
  json_util::write_file((fs::path(*directory_) / (entry.profile.profile_id + ".json")).string(),
                        j.dump(2) + "\n");
}

void ProfileStore::load_directory() {
  if (!fs::exists(*directory_)) return;
  for (const auto& file : fs::directory_iterator(*directory_)) {
    if (file.path().extension() != ".json") continue;
    json j = json_util::parse_or_throw(json_util::read_file(file.path().string()), "profile store");
    Entry entry;
    entry.profile = profile_from_document(json_util::require_field(j, "document", "profile store"));
    entry.profile.version = j.value("version", std::uint64_t{1});
    if (auto it = j.find("records"); it != j.end() && it->is_object()) {
      for (const auto& [name, value] : it->items()) entry.records[name] = value;
    }
    std::string id = entry.profile.profile_id;
    entries_.emplace(id, std::move(entry));
  }
}

}  // namespace govgw::profile
