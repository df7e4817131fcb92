// Copyright 2026 The qb Authors
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

#include "qb/status.h"

#include <string>

#include "absl/strings/cord.h"

namespace qb {
namespace {

constexpr char kKindUrl[] = "qb/kind";
constexpr char kPositionUrl[] = "qb/position";

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNone:
      return absl::StatusCode::kOk;
    case ErrorKind::kParseError:
    case ErrorKind::kUnsupportedStatement:
    case ErrorKind::kMalformedVariable:
    case ErrorKind::kUnknownProcedure:
    case ErrorKind::kUnboundVariable:
    case ErrorKind::kDegenerateRule:
    case ErrorKind::kInvalidArgument:
      return absl::StatusCode::kInvalidArgument;
    case ErrorKind::kMissingSchema:
    case ErrorKind::kScopeNotFound:
      return absl::StatusCode::kFailedPrecondition;
    case ErrorKind::kExplosionGuard:
    case ErrorKind::kMatchTooLarge:
      return absl::StatusCode::kResourceExhausted;
    case ErrorKind::kBudgetExceeded:
      return absl::StatusCode::kDeadlineExceeded;
    case ErrorKind::kNotFound:
      return absl::StatusCode::kNotFound;
    case ErrorKind::kConflict:
      return absl::StatusCode::kAlreadyExists;
    case ErrorKind::kIo:
      return absl::StatusCode::kUnavailable;
  }
  return absl::StatusCode::kUnknown;
}

}  // namespace

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNone: return "None";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kUnsupportedStatement: return "UnsupportedStatement";
    case ErrorKind::kMalformedVariable: return "MalformedVariable";
    case ErrorKind::kUnknownProcedure: return "UnknownProcedure";
    case ErrorKind::kUnboundVariable: return "UnboundVariable";
    case ErrorKind::kMissingSchema: return "MissingSchema";
    case ErrorKind::kScopeNotFound: return "ScopeNotFound";
    case ErrorKind::kDegenerateRule: return "DegenerateRule";
    case ErrorKind::kExplosionGuard: return "ExplosionGuard";
    case ErrorKind::kMatchTooLarge: return "MatchTooLarge";
    case ErrorKind::kBudgetExceeded: return "BudgetExceeded";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kNotFound: return "NotFound";
    case ErrorKind::kConflict: return "Conflict";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, const std::string& message,
                       int position) {
  absl::Status status(CodeFor(kind), message);
  status.SetPayload(kKindUrl,
                    absl::Cord(std::to_string(static_cast<int>(kind))));
  if (position >= 0) {
    status.SetPayload(kPositionUrl, absl::Cord(std::to_string(position)));
  }
  return status;
}

ErrorKind KindOf(const absl::Status& status) {
  if (status.ok()) return ErrorKind::kNone;
  auto payload = status.GetPayload(kKindUrl);
  if (!payload.has_value()) return ErrorKind::kNone;
  return static_cast<ErrorKind>(std::stoi(std::string(*payload)));
}

int PositionOf(const absl::Status& status) {
  auto payload = status.GetPayload(kPositionUrl);
  if (!payload.has_value()) return -1;
  return std::stoi(std::string(*payload));
}

}  // namespace qb
