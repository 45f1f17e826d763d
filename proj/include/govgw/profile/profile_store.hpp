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
#ifndef GOVGW_PROFILE_PROFILE_STORE_HPP_
#define GOVGW_PROFILE_PROFILE_STORE_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "govgw/profile/profile.hpp"

namespace govgw::profile {

// Current version of every deposited profile plus named side records
// (management process, pipeline descriptor, ...). Readers take copies;
// writers to the same profile are serialised through lock_profile().
class ProfileStore {
 public:
  explicit ProfileStore(std::optional<std::string> directory = std::nullopt);

  // Throws kDuplicateProfile.
  void deposit(const SecurityProfile& profile);
  // Throws kUnknownProfile.
  SecurityProfile get(const std::string& profile_id) const;
  bool contains(const std::string& profile_id) const;
  // Replaces the stored version. Throws kUnknownProfile.
  void put(const SecurityProfile& profile);
  std::vector<std::string> ids() const;

  void set_record(const std::string& profile_id, const std::string& name, nlohmann::json value);
  std::optional<nlohmann::json> record(const std::string& profile_id,
                                       const std::string& name) const;

  // Held by the orchestrator for the duration of a lifecycle operation.
  std::unique_lock<std::mutex> lock_profile(const std::string& profile_id);

 private:
  struct Entry {
    SecurityProfile profile;
    std::map<std::string, nlohmann::json> records;
    std::shared_ptr<std::mutex> writer = std::make_shared<std::mutex>();
  };

  void persist(const Entry& entry) const;
  void load_directory();

  std::optional<std::string> directory_;
  mutable std::shared_mutex mu_;
  std::map<std::string, Entry> entries_;
};

}  // namespace govgw::profile

#endif  // GOVGW_PROFILE_PROFILE_STORE_HPP_
