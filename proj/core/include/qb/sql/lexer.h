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

#ifndef QB_SQL_LEXER_H_
#define QB_SQL_LEXER_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "qb/sql/ast.h"

namespace qb::sql {

enum class TokenType {
  kIdent,
  kQuotedIdent,
  kString,
  kNumber,
  kParam,
  kOp,
  kVarElem,
  kVarSet,
  kEnd,
};

struct Token {
  TokenType type = TokenType::kEnd;
  // Decoded text: string contents without quotes, variable names without
  // brackets, operators verbatim.
  std::string text;
  int pos = 0;
  int end = 0;
};

// Splits SQL into tokens. In pattern mode `<name>` and `<<name>>` become
// variable tokens; a name starting with a digit is a MalformedVariable.
absl::StatusOr<std::vector<Token>> Tokenize(std::string_view sql,
                                            Dialect dialect,
                                            bool pattern_mode);

// Renders a token back to source form.
std::string RenderToken(const Token& token, Dialect dialect);

std::string QuoteString(std::string_view value, Dialect dialect);
std::string QuoteIdentifier(std::string_view name, Dialect dialect);

}  // namespace qb::sql

#endif  // QB_SQL_LEXER_H_
