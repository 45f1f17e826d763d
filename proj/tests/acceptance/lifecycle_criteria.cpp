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
#include <algorithm>
#include <chrono>
#include <string>

#include "bench.hpp"
#include "criteria.hpp"
#include "govgw/gateway/pipeline.hpp"
#include "govgw/harness/scenario.hpp"
#include "govgw/manager/process.hpp"

namespace acceptance {

using govgw::profile::LifecycleState;

Result end_to_end_scenario() {
  const auto& fixture = vms_fixture();
  int positives = 0, negatives = 0;
  for (const auto& m : fixture.corpus) (m.expect_accept ? positives : negatives)++;
  if (fixture.corpus.size() != 30 || negatives != 6) {
    return {false, "corpus has " + std::to_string(fixture.corpus.size()) + " messages, " +
                       std::to_string(negatives) + " negative"};
  }
  auto report = govgw::harness::run_scenario(fixture, govgw::harness::Config{},
                                             [](govgw::harness::Deployment& d) {
                                               collect_trails("scenario", d);
                                             });
  std::string failed;
  for (const auto& f : report.failed()) failed += "; " + f;
  auto find = [&](const std::string& name) -> const govgw::harness::ScenarioAssertion* {
    for (const auto& a : report.assertions) {
      if (a.name == name) return &a;
    }
    return nullptr;
  };
  for (const char* name : {"cp1 enacted", "cp2 enacted", "cp3 enacted",
                           "corpus positives accepted", "corpus negatives rejected"}) {
    const auto* a = find(name);
    if (!a || !a->pass) return {false, std::string(name) + " failed" + failed};
  }
  if (!report.ok()) return {false, "scenario assertions failed" + failed};
  if (report.elapsed_seconds >= 60) {
    return {false, "took " + std::to_string(report.elapsed_seconds) + " s"};
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "3 profiles Enacted, %s accepted, %s rejected, %zu assertions pass, %.2f s",
                find("corpus positives accepted")->detail.c_str(),
                find("corpus negatives rejected")->detail.c_str(), report.assertions.size(),
                report.elapsed_seconds);
  return {true, buf};
}

Result lifecycle_coverage() {
  Bench bench;
  int step_records = 0;
  for (const auto& prof : vms_fixture().profiles) {
    const std::string id = prof.profile_id;
    auto full = bench.enact(id);
    auto process = bench.manager().last_process(id);
    std::vector<int> expected(govgw::manager::kStepCount);
    for (int i = 0; i < govgw::manager::kStepCount; ++i) expected[i] = i + 1;
    if (!process || process->step_numbers() != expected || !process->ok()) {
      return {false, id + ": full run did not record steps 1-39 in order"};
    }
    // The audit trail carries the same sequence.
    std::vector<int> logged;
    for (const auto& r : bench.gateway().query_audit(id)) {
      if (r.action != "lifecycle-step" || r.outcome != "done") continue;
      logged.push_back(std::stoi(r.detail.substr(5)));
    }
    if (logged != expected) return {false, id + ": audit trail step sequence differs"};
    step_records += static_cast<int>(logged.size());

    auto snap = bench.deployment().snapshots().latest(id, LifecycleState::kInstantiable);
    if (!snap) return {false, id + ": no Instantiable snapshot"};
    bench.manager().restore(snap->snapshot_id());
    auto again = bench.manager().enact(id, bench.deployment().context_for(id));
    auto second = bench.manager().last_process(id);
    std::vector<int> tail(expected.begin() + 20, expected.end());
    if (!second || second->step_numbers() != tail) {
      return {false, id + ": restore + enact did not run exactly steps 21-39"};
    }
    auto a = govgw::gateway::normalized_descriptor(full->descriptor()).dump();
    auto b = govgw::gateway::normalized_descriptor(again->descriptor()).dump();
    if (a != b) return {false, id + ": descriptors differ:\n" + a + "\n" + b};
    if (bench.deployment().profiles().get(id).state != LifecycleState::kEnacted) {
      return {false, id + ": not Enacted after restore"};
    }
  }
  collect_trails("lifecycle", bench.deployment());
  return {true, "cp1-cp3: steps 1-39 in order (" + std::to_string(step_records) +
                    " audited), restore at Instantiable runs 21-39 with identical descriptors"};
}

}  // namespace acceptance
