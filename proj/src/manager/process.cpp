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
#include "govgw/manager/process.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "govgw/common/error.hpp"

namespace govgw::manager {

namespace {

constexpr std::array<std::string_view, kStepCount> kActions = {
    "define-service-description",
    "define-service-policy-scheme",
    "define-service-usage-policy",
    "define-service-management-process",
    "select-service",
    "define-policy-template",
    "define-transformation-domain",
    "define-policy-management-processes",
    "select-security-service",
    "define-operation-bindings",
    "define-invocation-pattern",
    "validate-service-dependencies",
    "select-security-services",
    "define-policy-transformations",
    "validate-policy-dependencies",
    "select-service-management-processes",
    "select-policy-management-processes",
    "define-coordination-process",
    "bind-management-processes",
    "validate-dependencies",
    "discover-infrastructure-profiles",
    "select-infrastructure-profile",
    "define-business-bindings",
    "validate-service-dependencies",
    "select-infrastructure-capability",
    "refine-policies",
    "update-capability-policies",
    "select-infrastructure-capabilities",
    "refine-policy-transformations",
    "validate-policy-dependencies",
    "select-profile-management-processes",
    "select-business-management-processes",
    "define-coordination-process",
    "bind-management-processes",
    "validate-dependencies",
    "update-policy-stores",
    "update-infrastructure-bindings",
    "expose-endpoint",
    "publish-service",
};

}  // namespace

std::string_view step_action(int step) {
  if (step < 1 || step > kStepCount) throw Error(Errc::kInvalidArgument, "no step " + std::to_string(step));
  return kActions[step - 1];
}

std::string_view to_string(StepStatus s) {
  switch (s) {
    case StepStatus::kPending: return "pending";
    case StepStatus::kDone: return "done";
    case StepStatus::kFailed: return "failed";
  }
  return "?";
}

void ManagementProcess::begin(int step) {
  std::string_view action = step_action(step);
  if (!steps_.empty()) {
    if (steps_.back().step >= step) {
      throw Error(Errc::kIllegalTransition, "step " + std::to_string(step) + " after step " +
                                                std::to_string(steps_.back().step));
    }
    for (const auto& s : steps_) {
      if (s.status != StepStatus::kDone) {
        throw Error(Errc::kIllegalTransition,
                    "step " + std::to_string(step) + " while step " + std::to_string(s.step) +
                        " is " + std::string(to_string(s.status)));
      }
    }
  }
  steps_.push_back({step, std::string(action), StepStatus::kPending, ""});
}

void ManagementProcess::complete(std::string artifact_ref) {
  if (steps_.empty() || steps_.back().status != StepStatus::kPending) {
    throw Error(Errc::kIllegalTransition, "no open step");
  }
  steps_.back().status = StepStatus::kDone;
  steps_.back().artifact_ref = std::move(artifact_ref);
}

void ManagementProcess::fail() {
  if (steps_.empty() || steps_.back().status != StepStatus::kPending) {
    throw Error(Errc::kIllegalTransition, "no open step");
  }
  steps_.back().status = StepStatus::kFailed;
}

std::vector<int> ManagementProcess::step_numbers() const {
  std::vector<int> out;
  for (const auto& s : steps_) out.push_back(s.step);
  return out;
}

bool ManagementProcess::ok() const {
  for (const auto& s : steps_) {
    if (s.status != StepStatus::kDone) return false;
  }
  return true;
}

nlohmann::json ManagementProcess::to_json() const {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : steps_) {
    steps.push_back({{"step", s.step},
                     {"action", s.action},
                     {"status", to_string(s.status)},
                     {"artifact", s.artifact_ref}});
  }
  return {{"process_id", process_id_}, {"steps", steps}};
}

void CoordinationProcess::add_node(ProcessNode node) {
  for (const auto& n : nodes_) {
    if (n.id == node.id) throw Error(Errc::kDuplicateId, "process node " + node.id);
  }
  nodes_.push_back(std::move(node));
}

void CoordinationProcess::add_edge(BindingEdge edge) { edges_.push_back(std::move(edge)); }

void CoordinationProcess::validate() const {
  std::map<std::string, const ProcessNode*> by_id;
  for (const auto& n : nodes_) by_id[n.id] = &n;
  auto has = [](const std::vector<std::string>& slots, const std::string& s) {
    return std::find(slots.begin(), slots.end(), s) != slots.end();
  };
  std::set<std::pair<std::string, std::string>> bound;
  for (const auto& e : edges_) {
    auto from = by_id.find(e.from_node);
    auto to = by_id.find(e.to_node);
    if (from == by_id.end() || to == by_id.end()) {
      throw Error(Errc::kDependencyViolation, "edge " + e.from_node + " -> " + e.to_node +
                                                  " names an unknown process");
    }
    if (!has(from->second->outputs, e.output) || !has(to->second->inputs, e.input)) {
      throw Error(Errc::kDependencyViolation, "edge " + e.from_node + "." + e.output + " -> " +
                                                  e.to_node + "." + e.input + " names an unknown slot");
    }
    if (!bound.insert({e.to_node, e.input}).second) {
      throw Error(Errc::kDependencyViolation, "input " + e.to_node + "." + e.input + " bound twice");
    }
  }
  for (const auto& n : nodes_) {
    for (const auto& in : n.inputs) {
      if (!bound.count({n.id, in})) {
        throw Error(Errc::kDependencyViolation, "input " + n.id + "." + in + " is unbound");
      }
    }
  }
  order();
}

std::vector<std::string> CoordinationProcess::order() const {
  std::map<std::string, int> indegree;
  for (const auto& n : nodes_) indegree[n.id] = 0;
  std::set<std::pair<std::string, std::string>> arcs;
  for (const auto& e : edges_) {
    if (arcs.insert({e.from_node, e.to_node}).second) ++indegree[e.to_node];
  }
  std::vector<std::string> out;
  std::set<std::string> placed;
  while (out.size() < nodes_.size()) {
    bool progressed = false;
    for (const auto& n : nodes_) {
      if (placed.count(n.id) || indegree[n.id] != 0) continue;
      out.push_back(n.id);
      placed.insert(n.id);
      for (const auto& [from, to] : arcs) {
        if (from == n.id) --indegree[to];
      }
      progressed = true;
      break;
    }
    if (!progressed) {
      std::string stuck;
      for (const auto& n : nodes_) {
        if (!placed.count(n.id)) stuck += (stuck.empty() ? "" : ", ") + n.id;
      }
      throw Error(Errc::kCycleInCoordination, "cycle among " + stuck);
    }
  }
  return out;
}

nlohmann::json CoordinationProcess::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nodes.push_back({{"id", n.id}, {"inputs", n.inputs}, {"outputs", n.outputs}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : edges_) {
    edges.push_back({{"from", e.from_node + "." + e.output}, {"to", e.to_node + "." + e.input}});
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

namespace {

std::pair<std::string, std::string> split_slot(const std::string& ref) {
  auto dot = ref.rfind('.');
  if (dot == std::string::npos) throw Error(Errc::kMalformedDocument, "bad slot reference " + ref);
  return {ref.substr(0, dot), ref.substr(dot + 1)};
}

}  // namespace

CoordinationProcess CoordinationProcess::from_json(const nlohmann::json& j) {
  CoordinationProcess out;
  try {
    for (const auto& n : j.at("nodes")) {
      out.add_node({n.at("id").get<std::string>(), n.at("inputs").get<std::vector<std::string>>(),
                    n.at("outputs").get<std::vector<std::string>>()});
    }
    for (const auto& e : j.at("edges")) {
      auto [fn, fo] = split_slot(e.at("from").get<std::string>());
      auto [tn, ti] = split_slot(e.at("to").get<std::string>());
      out.add_edge({fn, fo, tn, ti});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kMalformedDocument, std::string("coordination process: ") + e.what());
  }
  return out;
}

}  // namespace govgw::manager
