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
#include "govgw/gateway/pipeline.hpp"

#include "govgw/common/error.hpp"

namespace govgw::gateway {

std::string_view to_string(OnDeny d) { return d == OnDeny::kReject ? "reject" : "annotate"; }

EnactedPipeline::EnactedPipeline(std::string profile_id, std::uint64_t version, std::string route,
                                 std::vector<PipelineStep> steps, std::string forward_target)
    : pipeline_id_(profile_id + "-p" + std::to_string(version)),
      profile_id_(std::move(profile_id)),
      version_(version),
      route_(std::move(route)),
      steps_(std::move(steps)),
      forward_target_(std::move(forward_target)) {
  for (const auto& step : steps_) {
    if (!step.instance || step.instance->state() != capability::InstanceState::kActive) {
      throw Error(Errc::kInstanceNotActive,
                  "pipeline step on inactive instance " +
                      (step.instance ? step.instance->instance_id() : std::string("<none>")));
    }
    if (!step.instance->operations().count(step.operation)) {
      throw Error(Errc::kInvalidArgument,
                  step.instance->instance_id() + " has no operation " + step.operation);
    }
    if (auto audit = std::dynamic_pointer_cast<capability::AuditLogService>(step.instance)) {
      audit_ = audit;
    }
  }
}

capability::HashAlg EnactedPipeline::hash_alg() const {
  return audit_ ? audit_->hash_alg() : capability::HashAlg::kSha256;
}

nlohmann::json EnactedPipeline::descriptor() const {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : steps_) {
    steps.push_back({{"instance_id", s.instance->instance_id()},
                     {"capability_id", s.instance->descriptor_ref()},
                     {"mechanism", s.instance->descriptor().mechanism},
                     {"operation", s.operation},
                     {"input_bindings", s.input_bindings},
                     {"on_deny", to_string(s.on_deny)},
                     {"config", s.instance->current()->config},
                     {"policies", [&] {
                        nlohmann::json ps = nlohmann::json::array();
                        for (const auto& p : s.instance->policy_store()) {
                          ps.push_back(policy::policy_json(p));
                        }
                        return ps;
                      }()}});
  }
  return {{"pipeline_id", pipeline_id_}, {"profile_id", profile_id_},
          {"version", version_},         {"route", route_},
          {"forward_target", forward_target_}, {"steps", steps}};
}

nlohmann::json normalized_descriptor(const nlohmann::json& descriptor) {
  nlohmann::json out = descriptor;
  out["pipeline_id"] = "<pipeline>";
  out["version"] = 0;
  out["forward_target"] = "<target>";
  std::size_t i = 0;
  for (auto& s : out["steps"]) s["instance_id"] = "<instance-" + std::to_string(i++) + ">";
  return out;
}

}  // namespace govgw::gateway
