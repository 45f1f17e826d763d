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
#ifndef GOVGW_GATEWAY_PIPELINE_HPP_
#define GOVGW_GATEWAY_PIPELINE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "govgw/capability/instance.hpp"
#include "govgw/capability/services.hpp"

namespace govgw::gateway {

enum class OnDeny { kReject, kAnnotate };
std::string_view to_string(OnDeny d);

struct PipelineStep {
  std::shared_ptr<capability::CapabilityInstance> instance;
  std::string operation;
  std::map<std::string, std::string> input_bindings;
  OnDeny on_deny = OnDeny::kReject;
};

// Immutable. A changed pipeline is a new object with a higher version.
class EnactedPipeline {
 public:
  // Throws kInstanceNotActive if a step's instance is not active and
  // kInvalidArgument for operations the instance does not offer.
  EnactedPipeline(std::string profile_id, std::uint64_t version, std::string route,
                  std::vector<PipelineStep> steps, std::string forward_target);

  const std::string& pipeline_id() const { return pipeline_id_; }
  const std::string& profile_id() const { return profile_id_; }
  std::uint64_t version() const { return version_; }
  const std::string& route() const { return route_; }
  const std::vector<PipelineStep>& steps() const { return steps_; }
  const std::string& forward_target() const { return forward_target_; }

  // Audit-log step instance, if any; its algorithm chains the trail.
  std::shared_ptr<capability::AuditLogService> audit_instance() const { return audit_; }
  capability::HashAlg hash_alg() const;

  nlohmann::json descriptor() const;

 private:
  std::string pipeline_id_;
  std::string profile_id_;
  std::uint64_t version_;
  std::string route_;
  std::vector<PipelineStep> steps_;
  std::string forward_target_;
  std::shared_ptr<capability::AuditLogService> audit_;
};

// Descriptor with pipeline id, version and instance ids masked, so that two
// enactments of the same profile compare equal byte for byte.
nlohmann::json normalized_descriptor(const nlohmann::json& descriptor);

}  // namespace govgw::gateway

#endif  // GOVGW_GATEWAY_PIPELINE_HPP_
