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

// Error kinds shared by every module. Errors travel as absl::Status with the
// kind attached as a payload so callers can branch on it.

#ifndef QB_STATUS_H_
#define QB_STATUS_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace qb {

enum class ErrorKind {
  kNone = 0,
  kParseError,
  kUnsupportedStatement,
  kMalformedVariable,
  kUnknownProcedure,
  kUnboundVariable,
  kMissingSchema,
  kScopeNotFound,
  kDegenerateRule,
  kExplosionGuard,
  kMatchTooLarge,
  kBudgetExceeded,
  kInvalidArgument,
  kNotFound,
  kConflict,
  kIo,
};

const char* ErrorKindName(ErrorKind kind);

// Builds a status carrying `kind`. `position` is a byte offset for parse
// errors and -1 otherwise.
absl::Status MakeError(ErrorKind kind, const std::string& message,
                       int position = -1);

// kNone for OK statuses and for statuses created elsewhere.
ErrorKind KindOf(const absl::Status& status);

// Byte offset attached by the parser, or -1.
int PositionOf(const absl::Status& status);

}  // namespace qb

#endif  // QB_STATUS_H_
