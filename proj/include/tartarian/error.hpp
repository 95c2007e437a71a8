// Copyright 2026 The Tartarian Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tartarian {

enum class ErrorCode {
  // version
  EmptyInput,
  NoNumericSegment,
  InvalidVersion,
  BadConstraint,
  // manifest
  MalformedXml,
  MalformedJson,
  SchemaViolation,
  DuplicateModule,
  NestedInterpolation,
  BranchNotFound,
  PathNotFound,
  // depgraph / identifier
  DuplicateBranch,
  UnknownSourceBranch,
  // git and store
  GitUnavailable,
  GitFailure,
  NothingStaged,
  NoTags,
  TagSyntaxError,
  StoreCorrupt,
  // cli
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoNumericSegment: return "NoNumericSegment";
    case ErrorCode::InvalidVersion: return "InvalidVersion";
    case ErrorCode::BadConstraint: return "BadConstraint";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DuplicateModule: return "DuplicateModule";
    case ErrorCode::NestedInterpolation: return "NestedInterpolation";
    case ErrorCode::BranchNotFound: return "BranchNotFound";
    case ErrorCode::PathNotFound: return "PathNotFound";
    case ErrorCode::DuplicateBranch: return "DuplicateBranch";
    case ErrorCode::UnknownSourceBranch: return "UnknownSourceBranch";
    case ErrorCode::GitUnavailable: return "GitUnavailable";
    case ErrorCode::GitFailure: return "GitFailure";
    case ErrorCode::NothingStaged: return "NothingStaged";
    case ErrorCode::NoTags: return "NoTags";
    case ErrorCode::TagSyntaxError: return "TagSyntaxError";
    case ErrorCode::StoreCorrupt: return "StoreCorrupt";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library. The code is
/// stable and meant for programmatic dispatch; what() is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tartarian
