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

#include "govgw/common/error.hpp"

namespace govgw {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kMalformedDocument: return "MalformedDocument";
    case Errc::kUnknownField: return "UnknownField";
    case Errc::kMissingField: return "MissingField";
    case Errc::kIllegalTransition: return "IllegalTransition";
    case Errc::kAlreadyEnacted: return "AlreadyEnacted";
    case Errc::kUnknownSnapshot: return "UnknownSnapshot";
    case Errc::kUnknownProfile: return "UnknownProfile";
    case Errc::kDuplicateProfile: return "DuplicateProfile";
    case Errc::kDuplicateId: return "DuplicateId";
    case Errc::kInvalidTaxonomyRef: return "InvalidTaxonomyRef";
    case Errc::kInvalidDescriptor: return "InvalidDescriptor";
    case Errc::kUnknownCapability: return "UnknownCapability";
    case Errc::kSyntaxError: return "SyntaxError";
    case Errc::kTemplateSyntax: return "TemplateSyntax";
    case Errc::kMissingBinding: return "MissingBinding";
    case Errc::kUnknownTemplate: return "UnknownTemplate";
    case Errc::kRenameCollision: return "RenameCollision";
    case Errc::kInvalidTransform: return "InvalidTransform";
    case Errc::kInvalidConfigKey: return "InvalidConfigKey";
    case Errc::kInvalidConfigValue: return "InvalidConfigValue";
    case Errc::kPolicyGrammarUnsupported: return "PolicyGrammarUnsupported";
    case Errc::kInstanceNotActive: return "InstanceNotActive";
    case Errc::kMissingCredential: return "MissingCredential";
    case Errc::kSchemaViolation: return "SchemaViolation";
    case Errc::kUnknownPrincipal: return "UnknownPrincipal";
    case Errc::kTokenExpired: return "TokenExpired";
    case Errc::kStorageFailure: return "StorageFailure";
    case Errc::kTaxonomyViolation: return "TaxonomyViolation";
    case Errc::kNoCandidate: return "NoCandidate";
    case Errc::kIncompatibleInvocationPattern: return "IncompatibleInvocationPattern";
    case Errc::kDependencyViolation: return "DependencyViolation";
    case Errc::kMissingDependency: return "MissingDependency";
    case Errc::kGrammarMismatch: return "GrammarMismatch";
    case Errc::kCycleInCoordination: return "CycleInCoordination";
    case Errc::kCapabilityUnavailable: return "CapabilityUnavailable";
    case Errc::kPolicyPushFailure: return "PolicyPushFailure";
    case Errc::kChangeRejected: return "ChangeRejected";
    case Errc::kNoReplacement: return "NoReplacement";
    case Errc::kBufferOverflow: return "BufferOverflow";
    case Errc::kRouteConflict: return "RouteConflict";
    case Errc::kUnknownRoute: return "UnknownRoute";
    case Errc::kEndpointUnavailable: return "EndpointUnavailable";
    case Errc::kScenarioAssertionFailed: return "ScenarioAssertionFailed";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kIoError: return "IoError";
  }
  return "Unknown";
}

bool is_validation_error(Errc code) {
  switch (code) {
    case Errc::kMalformedDocument:
    case Errc::kUnknownField:
    case Errc::kMissingField:
    case Errc::kIllegalTransition:
    case Errc::kAlreadyEnacted:
    case Errc::kDuplicateProfile:
    case Errc::kDuplicateId:
    case Errc::kInvalidTaxonomyRef:
    case Errc::kInvalidDescriptor:
    case Errc::kSyntaxError:
    case Errc::kTemplateSyntax:
    case Errc::kMissingBinding:
    case Errc::kRenameCollision:
    case Errc::kInvalidTransform:
    case Errc::kInvalidConfigKey:
    case Errc::kInvalidConfigValue:
    case Errc::kPolicyGrammarUnsupported:
    case Errc::kSchemaViolation:
    case Errc::kTaxonomyViolation:
    case Errc::kIncompatibleInvocationPattern:
    case Errc::kDependencyViolation:
    case Errc::kMissingDependency:
    case Errc::kGrammarMismatch:
    case Errc::kCycleInCoordination:
    case Errc::kChangeRejected:
    case Errc::kScenarioAssertionFailed:
    case Errc::kInvalidArgument:
      return true;
    default:
      return false;
  }
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.code;
    if (v.requirement_index) out += "[" + std::to_string(*v.requirement_index) + "]";
    out += ": " + v.detail;
  }
  return out;
}

}  // namespace govgw
