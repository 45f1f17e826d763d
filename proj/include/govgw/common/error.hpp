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

#ifndef GOVGW_COMMON_ERROR_HPP_
#define GOVGW_COMMON_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace govgw {

// Every failure surfaced by the middleware carries one of these codes. The
// CLI maps them to exit codes and prints the name verbatim.
enum class Errc {
  kMalformedDocument,
  kUnknownField,
  kMissingField,
  kIllegalTransition,
  kAlreadyEnacted,
  kUnknownSnapshot,
  kUnknownProfile,
  kDuplicateProfile,
  kDuplicateId,
  kInvalidTaxonomyRef,
  kInvalidDescriptor,
  kUnknownCapability,
  kSyntaxError,
  kTemplateSyntax,
  kMissingBinding,
  kUnknownTemplate,
  kRenameCollision,
  kInvalidTransform,
  kInvalidConfigKey,
  kInvalidConfigValue,
  kPolicyGrammarUnsupported,
  kInstanceNotActive,
  kMissingCredential,
  kSchemaViolation,
  kUnknownPrincipal,
  kTokenExpired,
  kStorageFailure,
  kTaxonomyViolation,
  kNoCandidate,
  kIncompatibleInvocationPattern,
  kDependencyViolation,
  kMissingDependency,
  kGrammarMismatch,
  kCycleInCoordination,
  kCapabilityUnavailable,
  kPolicyPushFailure,
  kChangeRejected,
  kNoReplacement,
  kBufferOverflow,
  kRouteConflict,
  kUnknownRoute,
  kEndpointUnavailable,
  kScenarioAssertionFailed,
  kInvalidArgument,
  kIoError,
};

std::string_view to_string(Errc code);

// True for codes that describe a rejected input rather than a broken
// environment; the CLI exits with 1 for these and 2 otherwise.
bool is_validation_error(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string detail() const { return what(); }

 private:
  Errc code_;
};

// Parse failure in the assertion language; offset is a byte index into the
// input line.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& reason)
      : Error(Errc::kSyntaxError, reason + " at offset " + std::to_string(offset)),
        offset_(offset),
        reason_(reason) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t offset_;
  std::string reason_;
};

struct Violation {
  std::string code;
  std::string detail;
  std::optional<std::size_t> requirement_index;

  bool operator==(const Violation&) const = default;
};

// Validation findings are data, not failures.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string code, std::string detail,
           std::optional<std::size_t> index = std::nullopt) {
    violations.push_back({std::move(code), std::move(detail), index});
  }
  std::string summary() const;
};

}  // namespace govgw

#endif  // GOVGW_COMMON_ERROR_HPP_
