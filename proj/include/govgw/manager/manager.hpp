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
#ifndef GOVGW_MANAGER_MANAGER_HPP_
#define GOVGW_MANAGER_MANAGER_HPP_

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "govgw/capability/services.hpp"
#include "govgw/common/error.hpp"
#include "govgw/gateway/gateway.hpp"
#include "govgw/manager/process.hpp"
#include "govgw/policy/template.hpp"
#include "govgw/profile/profile.hpp"
#include "govgw/profile/profile_store.hpp"
#include "govgw/profile/snapshot_store.hpp"
#include "govgw/registry/registry.hpp"

namespace govgw::manager {

// Flags requirement categories whose prerequisite categories are absent,
// per the taxonomy's rule table.
ValidationReport check_missing_components(const profile::SecurityProfile& profile,
                                          const profile::Taxonomy& taxonomy);

// Deployment context supplied at enactment.
struct EnactContext {
  std::string route;           // empty: the profile id
  std::string forward_target;  // empty: the profile's target endpoint
  // Values for ${key} placeholders in policy templates and config.* values.
  std::map<std::string, std::string> bindings;

  nlohmann::json to_json() const;
  static EnactContext from_json(const nlohmann::json& j);
};

enum class AdaptationKind { kS1, kS2, kS3, kS4, kS5, kS6 };
std::string_view to_string(AdaptationKind k);
// Throws kInvalidArgument.
AdaptationKind adaptation_from_string(std::string_view name);

// Payloads:
//   S1 {"requirement": i, "parameter": key, "value": v}      config.<key> change
//   S2 {"requirement": {...requirement document...}}          new requirement
//   S3 {"requirement": i, "slot": s, "source": "context.<f>"} input injection
//   S4 {"capability_id": id}                                  replacement
//   S5 {"descriptor": {...}, "replaces": id (optional)}       external provider
//   S6 {"requirement": i, "grammar": g, "body": text}         new policy
struct AdaptationRequest {
  AdaptationKind kind = AdaptationKind::kS1;
  std::string profile_id;
  nlohmann::json payload;
};

// Throws kInvalidArgument when the payload does not fit the kind.
void check_payload(const AdaptationRequest& request);

enum class RecoveryMode { kInline, kDeferred };

struct RecoveryOutcome {
  std::string profile_id;
  std::string capability_id;
  bool recovered = false;
  gateway::ReplayReport replay;
  std::string error;  // error code when not recovered
};

class ProfileManager {
 public:
  ProfileManager(std::shared_ptr<registry::Registry> registry,
                 std::shared_ptr<profile::ProfileStore> profiles,
                 std::shared_ptr<profile::SnapshotStore> snapshots,
                 std::shared_ptr<gateway::Gateway> gateway, policy::TemplateLibrary templates,
                 RecoveryMode mode = RecoveryMode::kInline);
  ~ProfileManager();

  ProfileManager(const ProfileManager&) = delete;
  ProfileManager& operator=(const ProfileManager&) = delete;

  // Stores the profile at Deposited and snapshots it.
  profile::SecurityProfile deposit(profile::SecurityProfile profile);

  // Steps 1-12. A profile that failed here restarts from its Deposited
  // snapshot. Errors leave the profile Failed and are rethrown.
  profile::SecurityProfile run_consistency_stages(const std::string& profile_id);
  ValidationReport check_missing_components(const std::string& profile_id) const;
  // Steps 13-20 from BindingsValidated.
  profile::SecurityProfile build_instantiable(const std::string& profile_id);
  // Steps 21-39 from Instantiable. On error the profile stays Instantiable
  // and every instance created by the attempt is retired.
  std::shared_ptr<const gateway::EnactedPipeline> enact(const std::string& profile_id,
                                                        const EnactContext& context);
  // Replaces the stored profile with a copy of the snapshot. Throws
  // kUnknownSnapshot.
  profile::SecurityProfile restore(const std::string& snapshot_id);
  // Steps 1-39 as one management process.
  std::shared_ptr<const gateway::EnactedPipeline> run_full(const std::string& profile_id,
                                                           const EnactContext& context);

  // Throws kChangeRejected (cause in the detail) or kNoReplacement; the
  // profile and its serving pipeline are then unchanged.
  profile::SecurityProfile adapt(const AdaptationRequest& request);

  // Buffers the endpoint and re-runs steps 13-39 without the capability,
  // replaying the buffer through the new pipeline.
  RecoveryOutcome on_capability_failure(const std::string& profile_id,
                                        const std::string& capability_id);
  // Deferred mode: runs recoveries queued by availability events.
  std::vector<RecoveryOutcome> run_pending_recoveries();
  std::size_t pending_recoveries() const;

  // Last management process run on the profile.
  std::optional<ManagementProcess> last_process(const std::string& profile_id) const;
  std::set<std::string> live_instances(const std::string& profile_id) const;

  const capability::InstancePool& pool() const { return pool_; }
  registry::Registry& registry() { return *registry_; }
  profile::ProfileStore& profiles() { return *profiles_; }
  profile::SnapshotStore& snapshots() { return *snapshots_; }
  gateway::Gateway& gateway() { return *gateway_; }

 private:
  struct Run;
  enum class ExposeMode { kExpose, kReplay };

  Run start(const profile::SecurityProfile& profile, const std::string& label);
  void consistency(Run& run);
  void instantiable(Run& run);
  void enactment(Run& run, const EnactContext& context, ExposeMode mode);
  void commit(Run& run);
  void rollback_instances(Run& run);

  profile::SecurityProfile from_profile_complete(const profile::SecurityProfile& current) const;
  profile::SecurityProfile restart_point(const profile::SecurityProfile& current) const;
  const policy::PolicyTemplate* find_template(const std::string& profile_id,
                                              const std::string& id) const;
  EnactContext stored_context(const std::string& profile_id) const;
  std::set<std::string> excluded(const std::string& profile_id) const;
  void audit(const std::string& profile_id, const std::string& action,
             const std::string& outcome, const std::string& detail);

  void on_event(const registry::AvailabilityEvent& event);
  RecoveryOutcome recover(const std::string& profile_id, const std::string& capability_id);

  std::shared_ptr<registry::Registry> registry_;
  std::shared_ptr<profile::ProfileStore> profiles_;
  std::shared_ptr<profile::SnapshotStore> snapshots_;
  std::shared_ptr<gateway::Gateway> gateway_;
  const RecoveryMode mode_;
  capability::InstancePool pool_;

  mutable std::mutex mu_;
  policy::TemplateLibrary templates_;
  std::map<std::string, std::vector<std::string>> instances_;  // profile -> live ids
  std::map<std::string, std::set<std::string>> excluded_;
  std::map<std::string, ManagementProcess> processes_;
  std::deque<std::pair<std::string, std::string>> pending_;   // (profile, capability)
  std::set<std::pair<std::string, std::string>> stranded_;    // recovery found no replacement
  std::uint64_t process_seq_ = 0;
  int subscription_ = -1;
};

}  // namespace govgw::manager

#endif  // GOVGW_MANAGER_MANAGER_HPP_
