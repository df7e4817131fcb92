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

// Pattern matching of VarSQL fragments against trees, and instantiation of
// replacements from the resulting bindings.

#ifndef QB_REWRITE_MATCHER_H_
#define QB_REWRITE_MATCHER_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "absl/functional/function_ref.h"
#include "absl/status/statusor.h"
#include "qb/rewrite/binding.h"
#include "qb/sql/ast.h"

namespace qb::rewrite {

struct MatchLimits {
  // Longest unordered list searched by permutation when two or more fixed
  // items must be placed.
  size_t max_permuted_list = 12;
};

// Matches `pattern` with `node` as the match root and calls `accept` for
// each binding in exploration order until it returns true. Returns true
// when a binding was accepted. At the root, statement patterns ignore query
// clauses they do not mention and conjunction patterns may match a subset
// of a larger conjunction; the rest is recorded in the binding.
absl::StatusOr<bool> MatchAt(const sql::Pattern& pattern,
                             const sql::NodePtr& node,
                             absl::FunctionRef<bool(const Binding&)> accept,
                             const MatchLimits& limits = {});

// Nodes of `query` at the pattern's syntactic level, in pre-order.
std::vector<sql::Path> MatchSites(const sql::Pattern& pattern,
                                  const sql::NodePtr& query);

struct MatchResult {
  sql::Path site;
  Binding binding;
};

// First binding at the first matching site.
absl::StatusOr<std::optional<MatchResult>> MatchFirst(
    const sql::Pattern& pattern, const sql::NodePtr& query,
    const MatchLimits& limits = {});

// Convenience form; errors count as no match.
std::optional<Binding> Match(const sql::Pattern& pattern,
                             const sql::NodePtr& query);

// Substitutes bound fragments into `replacement`. Context recorded by the
// match (carried clauses or conjuncts) is merged back in.
absl::StatusOr<sql::NodePtr> Instantiate(const sql::Pattern& replacement,
                                         const Binding& binding);

// Text of a string literal, or of a template with its variables encoded.
bool EncodeStringValue(const sql::NodePtr& node, std::string* out);
// Inverse of EncodeStringValue.
sql::NodePtr DecodeStringValue(const std::string& text);

}  // namespace qb::rewrite

#endif  // QB_REWRITE_MATCHER_H_
