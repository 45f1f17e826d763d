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
#ifndef GOVGW_PROFILE_SNAPSHOT_STORE_HPP_
#define GOVGW_PROFILE_SNAPSHOT_STORE_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "govgw/common/time.hpp"
#include "govgw/profile/profile.hpp"

namespace govgw::profile {

// Immutable deep copy of a profile taken at a stage boundary.
class Snapshot {
 public:
  Snapshot(std::string snapshot_id, SecurityProfile document, TimePoint created_at)
      : snapshot_id_(std::move(snapshot_id)),
        document_(std::move(document)),
        created_at_(created_at) {}

  const std::string& snapshot_id() const { return snapshot_id_; }
  const std::string& profile_id() const { return document_.profile_id; }
  LifecycleState state() const { return document_.state; }
  const SecurityProfile& document() const { return document_; }
  TimePoint created_at() const { return created_at_; }

 private:
  const std::string snapshot_id_;
  const SecurityProfile document_;
  const TimePoint created_at_;
};

// Snapshot ids (and file names, when a directory is configured) follow
// <profile_id>.<state>.<n>, n counting snapshots per (profile, state).
class SnapshotStore {
 public:
  explicit SnapshotStore(std::optional<std::string> directory = std::nullopt,
                         Clock clock = system_clock());

  std::shared_ptr<const Snapshot> take(const SecurityProfile& profile);

  // Returns a copy of the snapshotted profile carrying a version number
  // higher than any this store has seen for that profile.
  // Throws kUnknownSnapshot.
  SecurityProfile restore(const std::string& snapshot_id);

  std::shared_ptr<const Snapshot> get(const std::string& snapshot_id) const;
  // Most recent snapshot of the profile at the given state, if any.
  std::shared_ptr<const Snapshot> latest(const std::string& profile_id,
                                         LifecycleState state) const;
  std::vector<std::shared_ptr<const Snapshot>> list(const std::string& profile_id) const;

 private:
  void load_directory();
  void persist(const Snapshot& snapshot) const;

  std::optional<std::string> directory_;
  Clock clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const Snapshot>> by_id_;
  std::vector<std::shared_ptr<const Snapshot>> ordered_;
  std::map<std::pair<std::string, LifecycleState>, int> sequence_;
  std::map<std::string, std::uint64_t> high_water_;
};

}  // namespace govgw::profile

#endif  // GOVGW_PROFILE_SNAPSHOT_STORE_HPP_
