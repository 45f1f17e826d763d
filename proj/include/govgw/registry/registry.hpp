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
#ifndef GOVGW_REGISTRY_REGISTRY_HPP_
#define GOVGW_REGISTRY_REGISTRY_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "govgw/profile/profile.hpp"
#include "govgw/profile/taxonomy.hpp"

namespace govgw::registry {

enum class InvocationPattern { kRequestResponse, kOneWay, kOutOfBandTokenFetch };
std::string_view to_string(InvocationPattern p);
// Throws kInvalidDescriptor for unknown names.
InvocationPattern pattern_from_string(std::string_view name);

enum class Availability { kAvailable, kUnavailable };

// A security capability service offered by a third-party provider.
struct CapabilityDescriptor {
  std::string capability_id;
  std::string provider;
  std::string category;
  std::string mechanism;
  std::map<std::string, std::string> attributes;
  std::string control_endpoint;
  std::string data_endpoint;
  std::set<std::string> supported_grammars;
  std::set<InvocationPattern> invocation_patterns;
  Availability availability = Availability::kAvailable;

  bool operator==(const CapabilityDescriptor&) const = default;
};

nlohmann::json descriptor_json(const CapabilityDescriptor& d);
CapabilityDescriptor descriptor_from_json(const nlohmann::json& j);
// Seed files are a JSON array of descriptors.
std::vector<CapabilityDescriptor> load_seed(const std::string& path);

// The match predicate used by find_candidates, exposed for reuse.
bool matches(const CapabilityDescriptor& d, const profile::Requirement& requirement);

struct AvailabilityEvent {
  std::uint64_t sequence = 0;
  std::string capability_id;
  Availability availability = Availability::kAvailable;
  bool deregistered = false;
};

using Subscriber = std::function<void(const AvailabilityEvent&)>;

class Registry {
 public:
  explicit Registry(profile::Taxonomy taxonomy);
  ~Registry();

  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  // The stored descriptor always starts available.
  // Throws kDuplicateId, kInvalidTaxonomyRef, kInvalidDescriptor.
  std::string register_capability(CapabilityDescriptor descriptor);

  // Throws kUnknownCapability.
  void deregister(const std::string& capability_id);
  void set_availability(const std::string& capability_id, Availability status);

  // Available descriptors matching the requirement, ascending by id.
  std::vector<CapabilityDescriptor> find_candidates(
      const profile::Requirement& requirement,
      const std::set<std::string>& excluded = {}) const;

  // Throws kUnknownCapability.
  CapabilityDescriptor get(const std::string& capability_id) const;
  bool contains(const std::string& capability_id) const;
  std::vector<CapabilityDescriptor> all() const;
  const profile::Taxonomy& taxonomy() const { return taxonomy_; }

  // Events are delivered on a dispatcher thread, in emission order, which
  // keeps them ordered per capability. Returns a handle for unsubscribe.
  int subscribe(Subscriber subscriber);
  void unsubscribe(int handle);
  // Blocks until every event emitted so far has been delivered.
  void flush_events();

 private:
  using Table = std::map<std::string, CapabilityDescriptor>;

  std::shared_ptr<const Table> snapshot() const;
  void emit(AvailabilityEvent event);
  void dispatch_loop();

  profile::Taxonomy taxonomy_;

  // Readers grab the current table pointer and never wait for writers.
  std::shared_ptr<const Table> table_;
  std::mutex write_mu_;

  struct Dispatcher;
  std::unique_ptr<Dispatcher> dispatcher_;
};

}  // namespace govgw::registry

#endif  // GOVGW_REGISTRY_REGISTRY_HPP_
