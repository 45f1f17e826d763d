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
#include <cstdio>
#include <cstring>
#include <exception>
#include <string>

#include "criteria.hpp"

namespace {

struct Criterion {
  int number;
  const char* title;
  acceptance::Result (*run)();
};

const Criterion kCriteria[] = {
    {1, "end-to-end VMS scenario", acceptance::end_to_end_scenario},
    {2, "lifecycle coverage and restore equivalence", acceptance::lifecycle_coverage},
    {3, "derivation engine equals brute-force closure", acceptance::derivation_oracle},
    {4, "missing-component detection over all category subsets",
     acceptance::dependency_validation},
    {5, "capability failure recovery without loss", acceptance::recovery_zero_loss},
    {6, "audit hash reconfiguration and rejected changes", acceptance::reconfiguration},
    {7, "audit completeness and tamper detection", acceptance::audit_completeness},
    {8, "token and header byte formats", acceptance::bit_exactness},
};

}  // namespace

// Usage: govgw_acceptance [criterion-number ...]
int main(int argc, char** argv) {
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (argc > 1) {
      bool wanted = false;
      for (int i = 1; i < argc; ++i) wanted |= std::atoi(argv[i]) == c.number;
      if (!wanted) continue;
    }
    acceptance::Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d %s: %s (%s)\n", c.number, r.pass ? "PASS" : "FAIL", c.title,
                r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
