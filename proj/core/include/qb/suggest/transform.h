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

#ifndef QB_SUGGEST_TRANSFORM_H_
#define QB_SUGGEST_TRANSFORM_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qb/sql/ast.h"
#include "qb/varsql/rule.h"

namespace qb::suggest {

enum class TransformKind { kLeaf, kSubtree, kMerge, kDrop };
inline constexpr TransformKind kTransformKinds[] = {
    TransformKind::kLeaf, TransformKind::kSubtree, TransformKind::kMerge,
    TransformKind::kDrop};
const char* TransformName(TransformKind kind);

// A bare rule over two trees; constraints and actions stay empty.
varsql::Rule RuleFromTrees(sql::NodePtr pattern, sql::NodePtr replacement);

// Renames variables to v1, v2, ... in pre-order over pattern then
// replacement.
varsql::Rule CanonicalizeVariables(const varsql::Rule& rule);

// Text of the canonicalized rule; equal keys mean the same rule.
std::string RuleKey(const varsql::Rule& rule);

// Canonicalizes `rule` and rejects it unless it is a usable suggestion: the
// rule validates, its pattern is not a bare variable, it has fixed elements,
// it changes something and its text parses back to the same trees.
std::optional<varsql::Rule> FinishCandidate(const varsql::Rule& rule);

// Every distinct one-hop child produced by `kind`, already finished.
std::vector<varsql::Rule> ApplyTransform(const varsql::Rule& rule,
                                         TransformKind kind);

// Lower-level steps, shared with the distance computation. None of them
// canonicalize; callers run FinishCandidate on the end result.

// Position of a node inside a column reference.
enum class LeafRole { kNone, kQualifier, kPart };

// Class key of a variablizable leaf (table, column, qualifier, number or
// string), or "" when `node` is not one.
std::string LeafKey(const varsql::Rule& rule, const sql::NodePtr& node,
                    LeafRole role);

// Distinct leaf class keys inside `node`.
std::set<std::string> LeafClasses(const varsql::Rule& rule,
                                  const sql::NodePtr& node);
size_t CountLeafClasses(const varsql::Rule& rule, const sql::NodePtr& node);

// Complex elements (expressions, predicates, subqueries) that
// Variablize-a-Subtree may replace.
bool IsSubtreeKind(const sql::NodePtr& node);

// Replaces the leaf class `key` everywhere with a fresh variable. String
// values are also spliced out of longer string literals.
varsql::Rule VariablizeLeafClass(const varsql::Rule& rule,
                                 const std::string& key,
                                 const std::string& var);

// Replaces every occurrence of `node` (structural equality) with `var`.
varsql::Rule VariablizeSubtree(const varsql::Rule& rule,
                               const sql::NodePtr& node,
                               const std::string& var);

// Replaces the sibling items (pointers into the pattern) with a set
// variable, and the equal run in the replacement if there is one.
std::optional<varsql::Rule> MergeItems(const varsql::Rule& rule,
                                       const std::vector<sql::NodePtr>& items,
                                       const std::string& var);

// Same, addressing the items as positions under the pattern node at `path`.
std::optional<varsql::Rule> MergeAt(const varsql::Rule& rule,
                                    const sql::Path& path,
                                    const std::vector<size_t>& positions,
                                    const std::string& var);

std::optional<varsql::Rule> DropClause(const varsql::Rule& rule,
                                       sql::NodeKind clause);
// Turns a rule whose statements hold a single WHERE or HAVING clause into a
// predicate-level rule.
std::optional<varsql::Rule> LiftPredicate(const varsql::Rule& rule);
std::optional<varsql::Rule> DropConjunct(const varsql::Rule& rule,
                                         const sql::NodePtr& conjunct);

// A variable name not used in `rule`.
std::string FreshVariable(const varsql::Rule& rule);

}  // namespace qb::suggest

#endif  // QB_SUGGEST_TRANSFORM_H_
