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

#ifndef QB_SQL_PARSER_H_
#define QB_SQL_PARSER_H_

#include <string_view>

#include "absl/status/statusor.h"
#include "qb/sql/ast.h"

namespace qb::sql {

struct ParseOptions {
  // Merge nested conjunctions with the same connective.
  bool flatten = true;
};

// Parses one SELECT-family statement. A trailing semicolon is accepted.
absl::StatusOr<NodePtr> ParseQuery(std::string_view sql,
                                   Dialect dialect = Dialect::kGeneric,
                                   const ParseOptions& options = {});

// Parses a full or partial statement, a predicate or an expression that may
// contain variables.
absl::StatusOr<Pattern> ParsePattern(std::string_view text,
                                     Dialect dialect = Dialect::kGeneric);

// Splits a script on top-level semicolons. Quotes and comments are honored.
std::vector<std::string> SplitStatements(std::string_view script);

}  // namespace qb::sql

#endif  // QB_SQL_PARSER_H_
