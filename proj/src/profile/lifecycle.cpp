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
#include "govgw/profile/lifecycle.hpp"

namespace govgw::profile {

SecurityProfile advance(const SecurityProfile& profile, const StageArtifact& artifact) {
  if (profile.state == LifecycleState::kEnacted) {
    throw Error(Errc::kAlreadyEnacted, "profile '" + profile.profile_id + "' is already enacted");
  }
  auto next = next_state(profile.state);
  if (!next) {
    throw Error(Errc::kIllegalTransition,
                "profile '" + profile.profile_id + "' cannot advance from Failed");
  }
  if (artifact.stage != *next) {
    throw Error(Errc::kIllegalTransition, "artifact for " + std::string(to_string(artifact.stage)) +
                                              " cannot follow " +
                                              std::string(to_string(profile.state)));
  }
  if (profile.requirements.empty()) {
    throw Error(Errc::kIllegalTransition,
                "profile '" + profile.profile_id + "' has no requirements");
  }
  SecurityProfile out = profile;
  out.state = *next;
  out.artifacts[*next] = artifact.content;
  out.version = profile.version + 1;
  return out;
}

SecurityProfile fail(const SecurityProfile& profile, std::string reason) {
  SecurityProfile out = profile;
  LifecycleState at = profile.state == LifecycleState::kFailed && profile.failure
                          ? profile.failure->stage
                          : profile.state;
  out.failure = FailureInfo{at, std::move(reason)};
  out.state = LifecycleState::kFailed;
  out.version = profile.version + 1;
  return out;
}

SecurityProfile reopen(const SecurityProfile& profile, LifecycleState stage) {
  if (stage == LifecycleState::kDeposited || stage == LifecycleState::kFailed) {
    throw Error(Errc::kIllegalTransition, "cannot reopen " + std::string(to_string(stage)));
  }
  LifecycleState reached = profile.state;
  if (reached == LifecycleState::kFailed && profile.failure) reached = profile.failure->stage;
  if (before(reached, stage)) {
    throw Error(Errc::kIllegalTransition, "profile '" + profile.profile_id + "' has not reached " +
                                              std::string(to_string(stage)));
  }
  SecurityProfile out = profile;
  out.state = static_cast<LifecycleState>(static_cast<int>(stage) - 1);
  out.failure.reset();
  for (auto it = out.artifacts.begin(); it != out.artifacts.end();) {
    if (!before(it->first, stage)) {
      it = out.artifacts.erase(it);
    } else {
      ++it;
    }
  }
  out.version = profile.version + 1;
  return out;
}

}  // namespace govgw::profile
