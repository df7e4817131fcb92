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

#ifndef QB_SUGGEST_COVERAGE_H_
#define QB_SUGGEST_COVERAGE_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "qb/sql/ast.h"
#include "qb/sql/lexer.h"
#include "qb/varsql/rule.h"

namespace qb::suggest {

// An example: a query and the rewrite the user wants for it.
struct RewritePair {
  sql::NodePtr original;
  sql::NodePtr rewritten;
  std::string original_sql;
  std::string rewritten_sql;
};

// Parses both sides. InvalidArgument if they are the same query.
absl::StatusOr<RewritePair> MakePair(std::string_view original,
                                     std::string_view rewritten,
                                     sql::Dialect dialect =
                                         sql::Dialect::kGeneric);

// The pair read as a fully concrete rule.
varsql::Rule PairAsRule(const RewritePair& pair);

enum class PairOutcome { kNotApplied, kExact, kDifferent };

// Rewrites the original with `rule` alone, to fixpoint.
PairOutcome ApplyToPair(const varsql::Rule& rule, const RewritePair& pair);

// True when `general`'s pattern matches `specific`'s pattern and rewriting
// with `general` turns it into `specific`'s replacement.
bool Covers(const varsql::Rule& general, const varsql::Rule& specific);

// Every pair is rewritten exactly by some rule and no rule rewrites any pair
// to something else.
bool RuleSetCovers(const std::vector<varsql::Rule>& rules,
                   const std::vector<RewritePair>& pairs);

}  // namespace qb::suggest

#endif  // QB_SUGGEST_COVERAGE_H_
