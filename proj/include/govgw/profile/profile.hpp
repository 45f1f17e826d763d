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
#ifndef GOVGW_PROFILE_PROFILE_HPP_
#define GOVGW_PROFILE_PROFILE_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "govgw/common/error.hpp"
#include "govgw/profile/taxonomy.hpp"

namespace govgw::profile {

// Ordered lifecycle checkpoints. Each state after kDeposited is reached by
// completing one group of the 39 management steps.
enum class LifecycleState : int {
  kDeposited = 0,
  kServicesDescribed,   // steps 1-4
  kPoliciesSchemed,     // steps 5-8
  kBindingsValidated,   // steps 9-12
  kProfileComplete,     // steps 13-15
  kInstantiable,        // steps 16-20
  kContextBound,        // steps 21-24
  kPoliciesRefined,     // steps 25-27
  kTransformsRefined,   // steps 28-30
  kCoordinationBound,   // steps 31-35
  kEnacted,             // steps 36-39
  kFailed,
};

inline constexpr std::array<LifecycleState, 11> kLifecycleOrder = {
    LifecycleState::kDeposited,         LifecycleState::kServicesDescribed,
    LifecycleState::kPoliciesSchemed,   LifecycleState::kBindingsValidated,
    LifecycleState::kProfileComplete,   LifecycleState::kInstantiable,
    LifecycleState::kContextBound,      LifecycleState::kPoliciesRefined,
    LifecycleState::kTransformsRefined, LifecycleState::kCoordinationBound,
    LifecycleState::kEnacted,
};

std::string_view to_string(LifecycleState s);
std::optional<LifecycleState> state_from_string(std::string_view name);
std::optional<LifecycleState> next_state(LifecycleState s);
// First and last management step completed on entry to s; {0, 0} for
// kDeposited and kFailed.
std::pair<int, int> step_range(LifecycleState s);
inline bool before(LifecycleState a, LifecycleState b) {
  return static_cast<int>(a) < static_cast<int>(b);
}

struct Target {
  std::string endpoint;
  std::string interface_name;
  std::vector<std::string> operations;

  bool operator==(const Target&) const = default;
};

enum class TransformKind { kIdentity, kFieldRename };

struct TransformDescriptor {
  std::string from_grammar;
  std::string to_grammar;
  TransformKind kind = TransformKind::kIdentity;
  std::map<std::string, std::string> rename_map;

  // Throws kInvalidTransform when the descriptor breaks its invariants.
  void validate() const;
  bool operator==(const TransformDescriptor&) const = default;
};

// Requirement attributes are matched verbatim against registry descriptors,
// except for two reserved forms that never take part in matching:
//   config.<key>        a parameter pushed to the capability's control pane
//   invocation_pattern  the invocation pattern the profile demands
inline constexpr std::string_view kConfigPrefix = "config.";
inline constexpr std::string_view kInvocationPatternKey = "invocation_pattern";
inline constexpr std::string_view kInputPrefix = "input.";
bool is_reserved_attribute(std::string_view key);

struct Requirement {
  std::string category;
  std::string mechanism;
  std::map<std::string, std::string> attributes;
  std::optional<std::string> policy_template_ref;
  std::optional<std::string> grammar;

  std::map<std::string, std::string> match_attributes() const;
  std::map<std::string, std::string> config_parameters() const;
  // input.<slot> attributes: data-pane input sources overriding the defaults.
  std::map<std::string, std::string> input_overrides() const;
  std::optional<std::string> demanded_pattern() const;
  bool operator==(const Requirement&) const = default;
};

struct FailureInfo {
  LifecycleState stage = LifecycleState::kDeposited;
  std::string reason;

  bool operator==(const FailureInfo&) const = default;
};

struct StageArtifact {
  LifecycleState stage;
  nlohmann::json content;
};

struct SecurityProfile {
  std::string profile_id;
  std::string owner;
  Target target;
  std::vector<Requirement> requirements;
  std::vector<TransformDescriptor> declared_transforms;
  LifecycleState state = LifecycleState::kDeposited;
  std::optional<FailureInfo> failure;
  // Keyed by the state whose entry produced the artifact.
  std::map<LifecycleState, nlohmann::json> artifacts;
  // Not part of the document: bumped on every new version of the value.
  std::uint64_t version = 1;
};

ValidationReport validate_against_taxonomy(const SecurityProfile& profile,
                                           const Taxonomy& taxonomy);

}  // namespace govgw::profile

#endif  // GOVGW_PROFILE_PROFILE_HPP_
