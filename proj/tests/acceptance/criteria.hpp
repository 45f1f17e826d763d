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
#ifndef GOVGW_TESTS_ACCEPTANCE_CRITERIA_HPP_
#define GOVGW_TESTS_ACCEPTANCE_CRITERIA_HPP_

#include <string>

namespace acceptance {

struct Result {
  bool pass = false;
  std::string detail;
};

Result end_to_end_scenario();
Result lifecycle_coverage();
Result derivation_oracle();
Result dependency_validation();
Result recovery_zero_loss();
Result reconfiguration();
Result audit_completeness();
Result bit_exactness();

}  // namespace acceptance

#endif  // GOVGW_TESTS_ACCEPTANCE_CRITERIA_HPP_
