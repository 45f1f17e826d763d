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
#include "govgw/profile/snapshot_store.hpp"

#include <algorithm>
#include <filesystem>

#include "govgw/common/error.hpp"
#include "govgw/common/json_util.hpp"
#include "govgw/profile/document.hpp"

namespace govgw::profile {

namespace fs = std::filesystem;
using nlohmann::json;

SnapshotStore::SnapshotStore(std::optional<std::string> directory, Clock clock)
    : directory_(std::move(directory)), clock_(std::move(clock)) {
  if (directory_) load_directory();
}

std::shared_ptr<const Snapshot> SnapshotStore::take(const SecurityProfile& profile) {
  std::lock_guard lock(mu_);
  int& seq = sequence_[{profile.profile_id, profile.state}];
  ++seq;
  std::string id =
      profile.profile_id + "." + std::string(to_string(profile.state)) + "." + std::to_string(seq);
  auto snap = std::make_shared<const Snapshot>(id, profile, clock_());
  by_id_[id] = snap;
  ordered_.push_back(snap);
  auto& hw = high_water_[profile.profile_id];
  hw = std::max(hw, profile.version);
  if (directory_) persist(*snap);
  return snap;
}

SecurityProfile SnapshotStore::restore(const std::string& snapshot_id) {
  std::lock_guard lock(mu_);
  auto it = by_id_.find(snapshot_id);
  if (it == by_id_.end()) throw Error(Errc::kUnknownSnapshot, "no snapshot '" + snapshot_id + "'");
  SecurityProfile out = it->second->document();
  auto& hw = high_water_[out.profile_id];
  hw = std::max(hw, out.version) + 1;
  out.version = hw;
  return out;
}

std::shared_ptr<const Snapshot> SnapshotStore::get(const std::string& snapshot_id) const {
  std::lock_guard lock(mu_);
  auto it = by_id_.find(snapshot_id);
  if (it == by_id_.end()) throw Error(Errc::kUnknownSnapshot, "no snapshot '" + snapshot_id + "'");
  return it->second;
}

std::shared_ptr<const Snapshot> SnapshotStore::latest(const std::string& profile_id,
                                                      LifecycleState state) const {
  std::lock_guard lock(mu_);
  for (auto it = ordered_.rbegin(); it != ordered_.rend(); ++it) {
    if ((*it)->profile_id() == profile_id && (*it)->state() == state) return *it;
  }
  return nullptr;
}

std::vector<std::shared_ptr<const Snapshot>> SnapshotStore::list(
    const std::string& profile_id) const {
  std::lock_guard lock(mu_);
  std::vector<std::shared_ptr<const Snapshot>> out;
  for (const auto& s : ordered_) {
    if (s->profile_id() == profile_id) out.push_back(s);
  }
  return out;
}

void SnapshotStore::persist(const Snapshot& snapshot) const {
  json j = {{"snapshot_id", snapshot.snapshot_id()},
            {"profile_id", snapshot.profile_id()},
            {"state", std::string(to_string(snapshot.state()))},
            {"created_at", format_iso8601(snapshot.created_at())},
            {"version", snapshot.document().version},
            {"document", document_json(snapshot.document())}};
  json_util::write_file((fs::path(*directory_) / (snapshot.snapshot_id() + ".json")).string(),
                        j.dump(2) + "\n");
}

void SnapshotStore::load_directory() {
  if (!fs::exists(*directory_)) return;
  std::vector<std::pair<TimePoint, std::shared_ptr<const Snapshot>>> found;
  for (const auto& entry : fs::directory_iterator(*directory_)) {
    if (entry.path().extension() != ".json") continue;
    json j = json_util::parse_or_throw(json_util::read_file(entry.path().string()), "snapshot");
    SecurityProfile doc = profile_from_document(json_util::require_field(j, "document", "snapshot"));
    doc.version = j.value("version", std::uint64_t{1});
    auto created = parse_iso8601(json_util::require_string(j, "created_at", "snapshot"));
    auto id = json_util::require_string(j, "snapshot_id", "snapshot");
    found.emplace_back(created, std::make_shared<const Snapshot>(id, std::move(doc), created));
  }
  // Creation time has second resolution; versions break ties.
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second->document().version != b.second->document().version) {
      return a.second->document().version < b.second->document().version;
    }
    return a.second->snapshot_id() < b.second->snapshot_id();
  });
  for (auto& [_, snap] : found) {
    by_id_[snap->snapshot_id()] = snap;
    ordered_.push_back(snap);
    auto pos = snap->snapshot_id().rfind('.');
    int n = std::stoi(snap->snapshot_id().substr(pos + 1));
    int& seq = sequence_[{snap->profile_id(), snap->state()}];
    seq = std::max(seq, n);
    auto& hw = high_water_[snap->profile_id()];
    hw = std::max(hw, snap->document().version);
  }
}

}  // namespace govgw::profile
