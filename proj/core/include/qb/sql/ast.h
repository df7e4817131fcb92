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

// Canonical syntax tree shared by queries, rule patterns and replacements.
// Nodes are immutable and shared; every edit builds new spines.

#ifndef QB_SQL_AST_H_
#define QB_SQL_AST_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace qb::sql {

enum class Dialect { kGeneric, kPostgres, kMySql };

absl::StatusOr<Dialect> ParseDialect(std::string_view name);
const char* DialectName(Dialect dialect);

enum class NodeKind {
  // Statements and clauses. Clause children of kSelect appear in the order
  // listed here.
  kSelect,
  kSetOp,
  kSelectList,
  kFrom,
  kWhere,
  kGroupBy,
  kHaving,
  kOrderBy,
  kLimit,
  // Table expressions.
  kTableRef,
  kJoin,
  kUsing,
  kAlias,
  kOrderItem,
  // Expressions.
  kColumnRef,
  kIdentifier,
  kLiteral,
  kTypedLiteral,
  kInterval,
  kFuncCall,
  kCast,
  kBinaryOp,
  kUnaryOp,
  kConjunction,
  kBetween,
  kInList,
  kCase,
  kWhen,
  kElse,
  kSubquery,
  kStar,
  kKeyword,
  kRaw,
  // Pattern-only nodes.
  kVarElem,
  kVarSet,
  kStringTemplate,
  kTemplateText,
};

const char* NodeKindName(NodeKind kind);

enum class LiteralType { kNone, kString, kNumber, kBoolean, kNull, kParam };

// Bit flags stored on nodes.
enum NodeFlag : uint32_t {
  kQuoted = 1u << 0,       // Identifier written in quotes.
  kAliasQuoted = 1u << 1,  // Alias written in quotes.
  kDistinct = 1u << 2,     // SELECT DISTINCT / COUNT(DISTINCT ...).
  kNegated = 1u << 3,      // NOT BETWEEN / NOT IN.
  kHasOperand = 1u << 4,   // CASE x WHEN ...
  kSetAll = 1u << 5,       // UNION ALL.
  kFromSyntax = 1u << 6,   // EXTRACT(unit FROM x).
  kOffsetOnly = 1u << 7,   // OFFSET without LIMIT.
  kPostfix = 1u << 8,      // x IS NULL and friends.
};

class Node;
using NodePtr = std::shared_ptr<const Node>;

class Node {
 public:
  static NodePtr Make(NodeKind kind, std::string text,
                      std::vector<NodePtr> children, uint32_t flags = 0,
                      LiteralType literal = LiteralType::kNone,
                      std::string alias = "");

  NodeKind kind() const { return kind_; }
  const std::string& text() const { return text_; }
  const std::string& alias() const { return alias_; }
  uint32_t flags() const { return flags_; }
  bool has_flag(uint32_t flag) const { return (flags_ & flag) != 0; }
  LiteralType literal() const { return literal_; }
  const std::vector<NodePtr>& children() const { return children_; }
  const NodePtr& child(size_t i) const { return children_[i]; }
  size_t size() const { return children_.size(); }
  size_t hash() const { return hash_; }
  // Number of nodes in this subtree.
  size_t tree_size() const { return tree_size_; }
  // True when the subtree holds no variable or template nodes.
  bool concrete() const { return concrete_; }

  Node(NodeKind kind, std::string text, std::vector<NodePtr> children,
       uint32_t flags, LiteralType literal, std::string alias);

 private:
  NodeKind kind_;
  std::string text_;
  std::string alias_;
  uint32_t flags_;
  LiteralType literal_;
  std::vector<NodePtr> children_;
  size_t hash_ = 0;
  size_t tree_size_ = 1;
  bool concrete_ = true;
};

// Convenience constructors.
NodePtr MakeIdentifier(std::string name, bool quoted = false);
NodePtr MakeString(std::string value);
NodePtr MakeNumber(std::string lexeme);
NodePtr MakeVarElem(std::string name);
NodePtr MakeVarSet(std::string name);
NodePtr MakeConjunction(std::string connective, std::vector<NodePtr> items);
NodePtr WithChildren(const NodePtr& node, std::vector<NodePtr> children);

// Structural equality. Keywords and unquoted names compare
// case-insensitively, literals exactly, and conjunct and FROM lists as
// multisets.
bool Equal(const NodePtr& a, const NodePtr& b);
bool EqualLists(const std::vector<NodePtr>& a, const std::vector<NodePtr>& b);
// Equality of everything except the children.
bool HeaderEqual(const NodePtr& a, const NodePtr& b);

struct NodeHash {
  size_t operator()(const NodePtr& n) const { return n ? n->hash() : 0; }
};
struct NodeEq {
  bool operator()(const NodePtr& a, const NodePtr& b) const {
    return Equal(a, b);
  }
};

bool IsConcrete(const NodePtr& node);
bool IsVariable(const NodePtr& node);
bool IsClauseKind(NodeKind kind);
// Conjunction and FROM children are unordered.
bool IsCommutative(const NodePtr& node);
bool IsComparisonOp(std::string_view op);

// Identifier spelling normalized for comparison.
std::string FoldName(std::string_view name, bool quoted);

// Clause access on kSelect nodes.
NodePtr FindClause(const NodePtr& select, NodeKind clause);
NodePtr WithClause(const NodePtr& select, NodeKind clause, NodePtr value);

// A location inside a tree as a sequence of child indices.
using Path = std::vector<size_t>;

// Visits every node in pre-order. Returning false from `fn` stops descent
// into that node's children.
void VisitPreorder(const NodePtr& root,
                   const std::function<bool(const NodePtr&, const Path&)>& fn);
NodePtr NodeAt(const NodePtr& root, const Path& path);
NodePtr ReplaceAt(const NodePtr& root, const Path& path, NodePtr value);
// Replaces the child at `path` with zero or more nodes.
NodePtr SpliceAt(const NodePtr& root, const Path& path,
                 const std::vector<NodePtr>& values);

// Flattens nested same-connective conjunctions, unwraps single-item ones and
// drops empty WHERE/HAVING clauses.
NodePtr Normalize(const NodePtr& root);

// Variable names in pre-order, duplicates preserved.
struct VarOccurrence {
  std::string name;
  bool is_set;
};
void CollectVariables(const NodePtr& root, std::vector<VarOccurrence>* out);

// Alias of a table reference if present, else its last name part.
std::string TableAliasOrName(const NodePtr& table);

enum class FragmentLevel { kStatement, kPredicate, kExpression };
const char* FragmentLevelName(FragmentLevel level);

// A parsed VarSQL fragment.
struct Pattern {
  FragmentLevel level = FragmentLevel::kExpression;
  NodePtr root;
};

// Level implied by the root node's kind.
FragmentLevel LevelOf(const NodePtr& root);

}  // namespace qb::sql

#endif  // QB_SQL_AST_H_
