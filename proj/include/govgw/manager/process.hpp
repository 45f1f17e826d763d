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
#ifndef GOVGW_MANAGER_PROCESS_HPP_
#define GOVGW_MANAGER_PROCESS_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace govgw::manager {

inline constexpr int kStepCount = 39;

// Short action name of a lifecycle step, 1..39.
std::string_view step_action(int step);

enum class StepStatus { kPending, kDone, kFailed };
std::string_view to_string(StepStatus s);

struct StepRecord {
  int step = 0;
  std::string action;
  StepStatus status = StepStatus::kPending;
  std::string artifact_ref;
};

// Ordered log of the lifecycle steps executed by one manager operation.
class ManagementProcess {
 public:
  explicit ManagementProcess(std::string process_id) : process_id_(std::move(process_id)) {}

  // Opens the next step. Throws kIllegalTransition unless the step number
  // is higher than every recorded one and all recorded steps are done.
  void begin(int step);
  void complete(std::string artifact_ref);
  void fail();

  const std::string& process_id() const { return process_id_; }
  const std::vector<StepRecord>& steps() const { return steps_; }
  std::vector<int> step_numbers() const;
  bool ok() const;

  nlohmann::json to_json() const;

 private:
  std::string process_id_;
  std::vector<StepRecord> steps_;
};

struct ProcessNode {
  std::string id;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

struct BindingEdge {
  std::string from_node;
  std::string output;
  std::string to_node;
  std::string input;
};

// Management processes wired output-to-input.
class CoordinationProcess {
 public:
  void add_node(ProcessNode node);
  void add_edge(BindingEdge edge);

  const std::vector<ProcessNode>& nodes() const { return nodes_; }
  const std::vector<BindingEdge>& edges() const { return edges_; }

  // Throws kCycleInCoordination when the edges do not form a DAG and
  // kDependencyViolation for dangling edges or unbound input slots.
  void validate() const;
  // Node ids in a dependency-respecting order, ties by insertion order.
  std::vector<std::string> order() const;

  nlohmann::json to_json() const;
  static CoordinationProcess from_json(const nlohmann::json& j);

 private:
  std::vector<ProcessNode> nodes_;
  std::vector<BindingEdge> edges_;
};

}  // namespace govgw::manager

#endif  // GOVGW_MANAGER_PROCESS_HPP_
