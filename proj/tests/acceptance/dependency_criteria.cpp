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
#include <array>
#include <set>
#include <string>

#include "bench.hpp"
#include "criteria.hpp"
#include "govgw/common/error.hpp"
#include "govgw/manager/manager.hpp"

namespace acceptance {

namespace {

const std::array<std::string, 5> kCategories = {"identity-management", "access-control", "audit",
                                                "transport", "transformation"};

// Rule table, stated independently of the taxonomy code: access control
// needs identity management; a transformation needs some other category.
std::set<std::string> expected_violations(const std::set<std::string>& present) {
  std::set<std::string> out;
  if (present.count("access-control") && !present.count("identity-management")) {
    out.insert("access-control");
  }
  if (present.count("transformation") && present.size() < 2) out.insert("transformation");
  return out;
}

}  // namespace

Result dependency_validation() {
  const auto taxonomy = govgw::profile::Taxonomy::builtin();
  int flagged_subsets = 0;
  for (unsigned mask = 0; mask < (1u << kCategories.size()); ++mask) {
    govgw::profile::SecurityProfile p;
    p.profile_id = "subset";
    std::set<std::string> present;
    for (std::size_t i = 0; i < kCategories.size(); ++i) {
      if (!(mask & (1u << i))) continue;
      present.insert(kCategories[i]);
      p.requirements.push_back({kCategories[i], "m" + std::to_string(i), {}, {}, {}});
    }
    auto report = govgw::manager::check_missing_components(p, taxonomy);
    std::set<std::string> flagged;
    for (const auto& v : report.violations) {
      if (v.code != "MissingDependency" || !v.requirement_index) {
        return {false, "unexpected violation " + v.code};
      }
      flagged.insert(p.requirements.at(*v.requirement_index).category);
    }
    if (report.violations.size() != flagged.size() || flagged != expected_violations(present)) {
      return {false, "subset mask " + std::to_string(mask) + " flagged " + report.summary()};
    }
    flagged_subsets += !flagged.empty();
  }

  // Access control without any identity management, end to end.
  Bench bench;
  auto prof = vms_fixture().profiles.at(1);
  prof.profile_id = "acl-only";
  prof.requirements = {prof.requirements.at(1)};
  bench.manager().deposit(prof);
  try {
    bench.manager().run_consistency_stages("acl-only");
    return {false, "access control without identity management was accepted"};
  } catch (const govgw::Error& e) {
    if (e.code() != govgw::Errc::kMissingDependency ||
        e.detail().find("identity-management") == std::string::npos) {
      return {false, "wrong error: " + std::string(govgw::to_string(e.code())) + " " + e.detail()};
    }
  }
  auto stored = bench.deployment().profiles().get("acl-only");
  if (stored.state != govgw::profile::LifecycleState::kFailed) {
    return {false, "profile not Failed after MissingDependency"};
  }
  return {true, "32 subsets match the rule table (" + std::to_string(flagged_subsets) +
                    " flagged); access-control alone fails with MissingDependency"};
}

}  // namespace acceptance
