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
#ifndef GOVGW_PROFILE_LIFECYCLE_HPP_
#define GOVGW_PROFILE_LIFECYCLE_HPP_

#include <string>

#include "govgw/profile/profile.hpp"

namespace govgw::profile {

// Moves the profile to the state following its current one and records the
// artifact. The input value is left untouched.
//
// Throws kAlreadyEnacted when the profile is Enacted and kIllegalTransition
// when the artifact is for any stage other than the next one.
SecurityProfile advance(const SecurityProfile& profile, const StageArtifact& artifact);

// Terminal failure at the current stage.
SecurityProfile fail(const SecurityProfile& profile, std::string reason);

// Re-entry used by recovery and adaptation: drops the artifacts of 'stage'
// and everything after it so that the stage can be produced again. The
// result sits in the state just before 'stage'.
SecurityProfile reopen(const SecurityProfile& profile, LifecycleState stage);

}  // namespace govgw::profile

#endif  // GOVGW_PROFILE_LIFECYCLE_HPP_
