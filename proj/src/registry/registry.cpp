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
#include "govgw/registry/registry.hpp"

#include <condition_variable>
#include <deque>
#include <thread>

#include "govgw/common/error.hpp"
#include "govgw/common/json_util.hpp"

namespace govgw::registry {

namespace ju = json_util;
using nlohmann::json;

std::string_view to_string(InvocationPattern p) {
  switch (p) {
    case InvocationPattern::kRequestResponse: return "request-response";
    case InvocationPattern::kOneWay: return "one-way";
    case InvocationPattern::kOutOfBandTokenFetch: return "out-of-band-token-fetch";
  }
  return "?";
}

InvocationPattern pattern_from_string(std::string_view name) {
  for (auto p : {InvocationPattern::kRequestResponse, InvocationPattern::kOneWay,
                 InvocationPattern::kOutOfBandTokenFetch}) {
    if (to_string(p) == name) return p;
  }
  throw Error(Errc::kInvalidDescriptor, "unknown invocation pattern '" + std::string(name) + "'");
}

json descriptor_json(const CapabilityDescriptor& d) {
  json patterns = json::array();
  for (auto p : d.invocation_patterns) patterns.push_back(std::string(to_string(p)));
  return {{"capability_id", d.capability_id},
          {"provider", d.provider},
          {"category", d.category},
          {"mechanism", d.mechanism},
          {"attributes", d.attributes},
          {"control_endpoint", d.control_endpoint},
          {"data_endpoint", d.data_endpoint},
          {"supported_grammars", d.supported_grammars},
          {"invocation_patterns", patterns},
          {"availability", d.availability == Availability::kAvailable ? "available" : "unavailable"}};
}

CapabilityDescriptor descriptor_from_json(const json& j) {
  constexpr std::string_view where = "capability descriptor";
  ju::require_object(j, where);
  ju::reject_unknown_fields(j,
                            {"capability_id", "provider", "category", "mechanism", "attributes",
                             "control_endpoint", "data_endpoint", "supported_grammars",
                             "invocation_patterns", "availability"},
                            where);
  CapabilityDescriptor d;
  d.capability_id = ju::require_string(j, "capability_id", where);
  d.provider = ju::require_string(j, "provider", where);
  d.category = ju::require_string(j, "category", where);
  d.mechanism = ju::require_string(j, "mechanism", where);
  if (auto it = j.find("attributes"); it != j.end()) d.attributes = ju::string_map(*it, where);
  d.control_endpoint = ju::optional_string(j, "control_endpoint", where);
  d.data_endpoint = ju::optional_string(j, "data_endpoint", where);
  if (auto it = j.find("supported_grammars"); it != j.end()) {
    auto list = ju::string_list(*it, where);
    d.supported_grammars.insert(list.begin(), list.end());
  }
  for (const auto& name : ju::string_list(ju::require_field(j, "invocation_patterns", where), where)) {
    d.invocation_patterns.insert(pattern_from_string(name));
  }
  std::string avail = ju::optional_string(j, "availability", where, "available");
  if (avail == "available") {
    d.availability = Availability::kAvailable;
  } else if (avail == "unavailable") {
    d.availability = Availability::kUnavailable;
  } else {
    throw Error(Errc::kMalformedDocument, "unknown availability '" + avail + "'");
  }
  return d;
}

std::vector<CapabilityDescriptor> load_seed(const std::string& path) {
  json j = ju::parse_or_throw(ju::read_file(path), "registry seed");
  if (!j.is_array()) throw Error(Errc::kMalformedDocument, "registry seed must be a JSON array");
  std::vector<CapabilityDescriptor> out;
  for (const auto& item : j) out.push_back(descriptor_from_json(item));
  return out;
}

bool matches(const CapabilityDescriptor& d, const profile::Requirement& requirement) {
  if (d.availability != Availability::kAvailable) return false;
  if (d.category != requirement.category || d.mechanism != requirement.mechanism) return false;
  for (const auto& [key, value] : requirement.match_attributes()) {
    auto it = d.attributes.find(key);
    if (it == d.attributes.end() || it->second != value) return false;
  }
  if (requirement.grammar && d.supported_grammars.count(*requirement.grammar) == 0) return false;
  return true;
}

struct Registry::Dispatcher {
  std::mutex mu;
  std::condition_variable cv;
  std::condition_variable drained;
  std::deque<AvailabilityEvent> queue;
  std::map<int, Subscriber> subscribers;
  int next_handle = 1;
  std::uint64_t emitted = 0;
  std::uint64_t delivered = 0;
  bool stopping = false;
  std::thread::id thread_id;
  std::thread worker;
};

Registry::Registry(profile::Taxonomy taxonomy)
    : taxonomy_(std::move(taxonomy)),
      table_(std::make_shared<const Table>()),
      dispatcher_(std::make_unique<Dispatcher>()) {
  dispatcher_->worker = std::thread([this] { dispatch_loop(); });
}

Registry::~Registry() {
  {
    std::lock_guard lock(dispatcher_->mu);
    dispatcher_->stopping = true;
  }
  dispatcher_->cv.notify_all();
  dispatcher_->worker.join();
}

std::shared_ptr<const Registry::Table> Registry::snapshot() const {
  return std::atomic_load(&table_);
}

std::string Registry::register_capability(CapabilityDescriptor descriptor) {
  if (descriptor.capability_id.empty()) {
    throw Error(Errc::kInvalidDescriptor, "capability_id must be non-empty");
  }
  if (descriptor.invocation_patterns.empty()) {
    throw Error(Errc::kInvalidDescriptor,
                "capability '" + descriptor.capability_id + "' declares no invocation pattern");
  }
  auto owner = taxonomy_.category_of(descriptor.mechanism);
  if (!taxonomy_.has_category(descriptor.category) || !owner || *owner != descriptor.category) {
    throw Error(Errc::kInvalidTaxonomyRef, "capability '" + descriptor.capability_id +
                                               "' names " + descriptor.category + "/" +
                                               descriptor.mechanism);
  }
  std::lock_guard lock(write_mu_);
  auto current = snapshot();
  if (current->count(descriptor.capability_id)) {
    throw Error(Errc::kDuplicateId, "capability '" + descriptor.capability_id + "' exists");
  }
  auto next = std::make_shared<Table>(*current);
  descriptor.availability = Availability::kAvailable;
  std::string id = descriptor.capability_id;
  next->emplace(id, std::move(descriptor));
  std::atomic_store(&table_, std::shared_ptr<const Table>(std::move(next)));
  return id;
}

void Registry::deregister(const std::string& capability_id) {
  {
    std::lock_guard lock(write_mu_);
    auto current = snapshot();
    if (!current->count(capability_id)) {
      throw Error(Errc::kUnknownCapability, "no capability '" + capability_id + "'");
    }
    auto next = std::make_shared<Table>(*current);
    next->erase(capability_id);
    std::atomic_store(&table_, std::shared_ptr<const Table>(std::move(next)));
    emit({0, capability_id, Availability::kUnavailable, true});
  }
}

void Registry::set_availability(const std::string& capability_id, Availability status) {
  std::lock_guard lock(write_mu_);
  auto current = snapshot();
  auto it = current->find(capability_id);
  if (it == current->end()) {
    throw Error(Errc::kUnknownCapability, "no capability '" + capability_id + "'");
  }
  auto next = std::make_shared<Table>(*current);
  (*next)[capability_id].availability = status;
  std::atomic_store(&table_, std::shared_ptr<const Table>(std::move(next)));
  emit({0, capability_id, status, false});
}

std::vector<CapabilityDescriptor> Registry::find_candidates(
    const profile::Requirement& requirement, const std::set<std::string>& excluded) const {
  auto table = snapshot();
  std::vector<CapabilityDescriptor> out;
  for (const auto& [id, d] : *table) {
    if (excluded.count(id)) continue;
    if (matches(d, requirement)) out.push_back(d);
  }
  return out;
}

CapabilityDescriptor Registry::get(const std::string& capability_id) const {
  auto table = snapshot();
  auto it = table->find(capability_id);
  if (it == table->end()) {
    throw Error(Errc::kUnknownCapability, "no capability '" + capability_id + "'");
  }
  return it->second;
}

bool Registry::contains(const std::string& capability_id) const {
  return snapshot()->count(capability_id) != 0;
}

std::vector<CapabilityDescriptor> Registry::all() const {
  auto table = snapshot();
  std::vector<CapabilityDescriptor> out;
  for (const auto& [_, d] : *table) out.push_back(d);
  return out;
}

int Registry::subscribe(Subscriber subscriber) {
  std::lock_guard lock(dispatcher_->mu);
  int handle = dispatcher_->next_handle++;
  dispatcher_->subscribers.emplace(handle, std::move(subscriber));
  return handle;
}

void Registry::unsubscribe(int handle) {
  std::lock_guard lock(dispatcher_->mu);
  dispatcher_->subscribers.erase(handle);
}

void Registry::flush_events() {
  std::unique_lock lock(dispatcher_->mu);
  // A subscriber flushing from inside a callback would wait on itself.
  if (std::this_thread::get_id() == dispatcher_->thread_id) return;
  std::uint64_t target = dispatcher_->emitted;
  dispatcher_->drained.wait(lock, [&] { return dispatcher_->delivered >= target; });
}

// Called with write_mu_ held, so sequence numbers follow write order.
void Registry::emit(AvailabilityEvent event) {
  {
    std::lock_guard lock(dispatcher_->mu);
    event.sequence = ++dispatcher_->emitted;
    dispatcher_->queue.push_back(std::move(event));
  }
  dispatcher_->cv.notify_one();
}

void Registry::dispatch_loop() {
  auto& d = *dispatcher_;
  {
    std::lock_guard lock(d.mu);
    d.thread_id = std::this_thread::get_id();
  }
  std::unique_lock lock(d.mu);
  while (true) {
    d.cv.wait(lock, [&] { return d.stopping || !d.queue.empty(); });
    if (d.queue.empty() && d.stopping) return;
    AvailabilityEvent event = std::move(d.queue.front());
    d.queue.pop_front();
    auto subscribers = d.subscribers;
    lock.unlock();
    for (auto& [_, fn] : subscribers) fn(event);
    lock.lock();
    ++d.delivered;
    d.drained.notify_all();
  }
}

}  // namespace govgw::registry
