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
#ifndef GOVGW_COMMON_TIME_HPP_
#define GOVGW_COMMON_TIME_HPP_

#include <chrono>
#include <functional>
#include <string>
#include <string_view>

namespace govgw {

using TimePoint = std::chrono::system_clock::time_point;

// Injectable wall clock; tests pin it to make outputs reproducible.
using Clock = std::function<TimePoint()>;

Clock system_clock();
Clock fixed_clock(TimePoint at);

// Second-precision UTC, e.g. 2010-01-01T00:00:00Z.
std::string format_iso8601(TimePoint t);

// Accepts exactly the format produced by format_iso8601. Throws
// Error(kInvalidArgument) on anything else.
TimePoint parse_iso8601(std::string_view text);

}  // namespace govgw

#endif  // GOVGW_COMMON_TIME_HPP_
