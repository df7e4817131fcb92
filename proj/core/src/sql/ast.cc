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

#include "qb/sql/ast.h"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "qb/status.h"

namespace qb::sql {
namespace {

// Flags that do not take part in equality.
constexpr uint32_t kCosmeticFlags = kQuoted | kAliasQuoted;

size_t Mix(size_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb93fe53a87ebULL;
  h ^= h >> 33;
  return h;
}

size_t Combine(size_t seed, size_t v) {
  return seed ^ (Mix(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

bool CaseInsensitiveText(NodeKind kind) {
  return kind == NodeKind::kFuncCall || kind == NodeKind::kKeyword;
}

bool CommutativeKind(NodeKind kind) {
  return kind == NodeKind::kConjunction || kind == NodeKind::kFrom;
}

size_t StringHash(const std::string& s) { return std::hash<std::string>{}(s); }

bool TextEqual(const Node& a, const Node& b) {
  if (a.kind() == NodeKind::kIdentifier) {
    bool qa = a.has_flag(kQuoted), qb = b.has_flag(kQuoted);
    if (!qa && !qb) return absl::EqualsIgnoreCase(a.text(), b.text());
    return FoldName(a.text(), qa) == FoldName(b.text(), qb);
  }
  if (CaseInsensitiveText(a.kind())) {
    return absl::EqualsIgnoreCase(a.text(), b.text());
  }
  return a.text() == b.text();
}

bool AliasEqual(const Node& a, const Node& b) {
  if (a.alias().empty() || b.alias().empty()) {
    return a.alias().empty() && b.alias().empty();
  }
  return FoldName(a.alias(), a.has_flag(kAliasQuoted)) ==
         FoldName(b.alias(), b.has_flag(kAliasQuoted));
}

bool EqualMultiset(const std::vector<NodePtr>& a,
                   const std::vector<NodePtr>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const NodePtr& x : a) {
    bool found = false;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j] || b[j]->hash() != x->hash()) continue;
      if (Equal(x, b[j])) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

void Visit(const NodePtr& node, Path* path,
           const std::function<bool(const NodePtr&, const Path&)>& fn) {
  if (!fn(node, *path)) return;
  for (size_t i = 0; i < node->size(); ++i) {
    path->push_back(i);
    Visit(node->child(i), path, fn);
    path->pop_back();
  }
}

NodePtr ReplaceRec(const NodePtr& node, const Path& path, size_t depth,
                   const std::vector<NodePtr>& values, bool splice) {
  std::vector<NodePtr> children = node->children();
  size_t idx = path[depth];
  if (depth + 1 == path.size()) {
    if (splice) {
      children.erase(children.begin() + idx);
      children.insert(children.begin() + idx, values.begin(), values.end());
    } else {
      children[idx] = values.front();
    }
  } else {
    children[idx] = ReplaceRec(children[idx], path, depth + 1, values, splice);
  }
  return WithChildren(node, std::move(children));
}

bool IsEmptyConjunction(const NodePtr& n) {
  return n->kind() == NodeKind::kConjunction && n->size() == 0;
}

}  // namespace

absl::StatusOr<Dialect> ParseDialect(std::string_view name) {
  std::string lower = absl::AsciiStrToLower(std::string(name));
  if (lower == "generic" || lower.empty()) return Dialect::kGeneric;
  if (lower == "postgres" || lower == "postgresql") return Dialect::kPostgres;
  if (lower == "mysql") return Dialect::kMySql;
  return MakeError(ErrorKind::kInvalidArgument,
                   "unknown dialect '" + std::string(name) + "'");
}

const char* DialectName(Dialect dialect) {
  switch (dialect) {
    case Dialect::kGeneric: return "generic";
    case Dialect::kPostgres: return "postgres";
    case Dialect::kMySql: return "mysql";
  }
  return "generic";
}

const char* NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kSelect: return "Select";
    case NodeKind::kSetOp: return "SetOp";
    case NodeKind::kSelectList: return "SelectList";
    case NodeKind::kFrom: return "From";
    case NodeKind::kWhere: return "Where";
    case NodeKind::kGroupBy: return "GroupBy";
    case NodeKind::kHaving: return "Having";
    case NodeKind::kOrderBy: return "OrderBy";
    case NodeKind::kLimit: return "Limit";
    case NodeKind::kTableRef: return "TableRef";
    case NodeKind::kJoin: return "Join";
    case NodeKind::kUsing: return "Using";
    case NodeKind::kAlias: return "Alias";
    case NodeKind::kOrderItem: return "OrderItem";
    case NodeKind::kColumnRef: return "ColumnRef";
    case NodeKind::kIdentifier: return "Identifier";
    case NodeKind::kLiteral: return "Literal";
    case NodeKind::kTypedLiteral: return "TypedLiteral";
    case NodeKind::kInterval: return "Interval";
    case NodeKind::kFuncCall: return "FuncCall";
    case NodeKind::kCast: return "Cast";
    case NodeKind::kBinaryOp: return "BinaryOp";
    case NodeKind::kUnaryOp: return "UnaryOp";
    case NodeKind::kConjunction: return "Conjunction";
    case NodeKind::kBetween: return "Between";
    case NodeKind::kInList: return "InList";
    case NodeKind::kCase: return "Case";
    case NodeKind::kWhen: return "When";
    case NodeKind::kElse: return "Else";
    case NodeKind::kSubquery: return "Subquery";
    case NodeKind::kStar: return "Star";
    case NodeKind::kKeyword: return "Keyword";
    case NodeKind::kRaw: return "Raw";
    case NodeKind::kVarElem: return "VarElem";
    case NodeKind::kVarSet: return "VarSet";
    case NodeKind::kStringTemplate: return "StringTemplate";
    case NodeKind::kTemplateText: return "TemplateText";
  }
  return "?";
}

Node::Node(NodeKind kind, std::string text, std::vector<NodePtr> children,
           uint32_t flags, LiteralType literal, std::string alias)
    : kind_(kind),
      text_(std::move(text)),
      alias_(std::move(alias)),
      flags_(flags),
      literal_(literal),
      children_(std::move(children)) {
  size_t h = Combine(static_cast<size_t>(kind_), flags_ & ~kCosmeticFlags);
  h = Combine(h, static_cast<size_t>(literal_));
  if (kind_ == NodeKind::kIdentifier) {
    h = Combine(h, StringHash(FoldName(text_, has_flag(kQuoted))));
  } else if (CaseInsensitiveText(kind_)) {
    h = Combine(h, StringHash(absl::AsciiStrToLower(text_)));
  } else {
    h = Combine(h, StringHash(text_));
  }
  if (!alias_.empty()) {
    h = Combine(h, StringHash(FoldName(alias_, has_flag(kAliasQuoted))));
  }
  concrete_ = kind_ != NodeKind::kVarElem && kind_ != NodeKind::kVarSet &&
              kind_ != NodeKind::kStringTemplate;
  if (CommutativeKind(kind_)) {
    size_t sum = 0;
    for (const NodePtr& c : children_) sum += Mix(c->hash());
    h = Combine(h, sum);
  }
  for (const NodePtr& c : children_) {
    if (!CommutativeKind(kind_)) h = Combine(h, c->hash());
    tree_size_ += c->tree_size();
    concrete_ = concrete_ && c->concrete();
  }
  hash_ = h;
}

NodePtr Node::Make(NodeKind kind, std::string text,
                   std::vector<NodePtr> children, uint32_t flags,
                   LiteralType literal, std::string alias) {
  return std::make_shared<const Node>(kind, std::move(text),
                                      std::move(children), flags, literal,
                                      std::move(alias));
}

NodePtr MakeIdentifier(std::string name, bool quoted) {
  return Node::Make(NodeKind::kIdentifier, std::move(name), {},
                    quoted ? kQuoted : 0);
}

NodePtr MakeString(std::string value) {
  return Node::Make(NodeKind::kLiteral, std::move(value), {}, 0,
                    LiteralType::kString);
}

NodePtr MakeNumber(std::string lexeme) {
  return Node::Make(NodeKind::kLiteral, std::move(lexeme), {}, 0,
                    LiteralType::kNumber);
}

NodePtr MakeVarElem(std::string name) {
  return Node::Make(NodeKind::kVarElem, std::move(name), {});
}

NodePtr MakeVarSet(std::string name) {
  return Node::Make(NodeKind::kVarSet, std::move(name), {});
}

NodePtr MakeConjunction(std::string connective, std::vector<NodePtr> items) {
  return Node::Make(NodeKind::kConjunction, std::move(connective),
                    std::move(items));
}

NodePtr WithChildren(const NodePtr& node, std::vector<NodePtr> children) {
  if (children.size() == node->size() &&
      std::equal(children.begin(), children.end(),
                 node->children().begin())) {
    return node;
  }
  return Node::Make(node->kind(), node->text(), std::move(children),
                    node->flags(), node->literal(), node->alias());
}

bool Equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->hash() != b->hash()) return false;
  if (a->kind() != b->kind() || a->literal() != b->literal()) return false;
  if ((a->flags() & ~kCosmeticFlags) != (b->flags() & ~kCosmeticFlags)) {
    return false;
  }
  if (!TextEqual(*a, *b) || !AliasEqual(*a, *b)) return false;
  if (CommutativeKind(a->kind())) {
    return EqualMultiset(a->children(), b->children());
  }
  return EqualLists(a->children(), b->children());
}

bool HeaderEqual(const NodePtr& a, const NodePtr& b) {
  if (a->kind() != b->kind() || a->literal() != b->literal()) return false;
  if ((a->flags() & ~kCosmeticFlags) != (b->flags() & ~kCosmeticFlags)) {
    return false;
  }
  return TextEqual(*a, *b) && AliasEqual(*a, *b);
}

bool EqualLists(const std::vector<NodePtr>& a,
                const std::vector<NodePtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!Equal(a[i], b[i])) return false;
  }
  return true;
}

bool IsConcrete(const NodePtr& node) { return node->concrete(); }

bool IsVariable(const NodePtr& node) {
  return node->kind() == NodeKind::kVarElem ||
         node->kind() == NodeKind::kVarSet;
}

bool IsClauseKind(NodeKind kind) {
  switch (kind) {
    case NodeKind::kSelectList:
    case NodeKind::kFrom:
    case NodeKind::kWhere:
    case NodeKind::kGroupBy:
    case NodeKind::kHaving:
    case NodeKind::kOrderBy:
    case NodeKind::kLimit:
      return true;
    default:
      return false;
  }
}

bool IsCommutative(const NodePtr& node) {
  return CommutativeKind(node->kind());
}

bool IsComparisonOp(std::string_view op) {
  static const char* const kOps[] = {
      "=",        "<>",           "<",         ">",
      "<=",       ">=",           "LIKE",      "NOT LIKE",
      "ILIKE",    "NOT ILIKE",    "SIMILAR TO", "NOT SIMILAR TO",
      "IS DISTINCT FROM", "IS NOT DISTINCT FROM", "REGEXP", "RLIKE"};
  for (const char* k : kOps) {
    if (op == k) return true;
  }
  return false;
}

std::string FoldName(std::string_view name, bool quoted) {
  if (quoted) return std::string(name);
  return absl::AsciiStrToLower(std::string(name));
}

NodePtr FindClause(const NodePtr& select, NodeKind clause) {
  if (!select || select->kind() != NodeKind::kSelect) return nullptr;
  for (const NodePtr& c : select->children()) {
    if (c->kind() == clause) return c;
  }
  return nullptr;
}

NodePtr WithClause(const NodePtr& select, NodeKind clause, NodePtr value) {
  std::vector<NodePtr> out;
  bool placed = false;
  for (const NodePtr& c : select->children()) {
    if (c->kind() == clause) {
      if (value) out.push_back(value);
      placed = true;
      continue;
    }
    if (!placed && value && static_cast<int>(c->kind()) >
                                static_cast<int>(clause)) {
      out.push_back(value);
      placed = true;
    }
    out.push_back(c);
  }
  if (!placed && value) out.push_back(value);
  return WithChildren(select, std::move(out));
}

void VisitPreorder(const NodePtr& root,
                   const std::function<bool(const NodePtr&, const Path&)>& fn) {
  Path path;
  Visit(root, &path, fn);
}

NodePtr NodeAt(const NodePtr& root, const Path& path) {
  NodePtr n = root;
  for (size_t i : path) n = n->child(i);
  return n;
}

NodePtr ReplaceAt(const NodePtr& root, const Path& path, NodePtr value) {
  if (path.empty()) return value;
  return ReplaceRec(root, path, 0, {std::move(value)}, false);
}

NodePtr SpliceAt(const NodePtr& root, const Path& path,
                 const std::vector<NodePtr>& values) {
  return ReplaceRec(root, path, 0, values, true);
}

NodePtr Normalize(const NodePtr& root) {
  std::vector<NodePtr> children;
  children.reserve(root->size());
  bool changed = false;
  for (const NodePtr& c : root->children()) {
    NodePtr n = Normalize(c);
    changed = changed || n != c;
    children.push_back(std::move(n));
  }
  if (root->kind() == NodeKind::kConjunction) {
    std::vector<NodePtr> flat;
    for (const NodePtr& c : children) {
      if (c->kind() == NodeKind::kConjunction && c->text() == root->text()) {
        flat.insert(flat.end(), c->children().begin(), c->children().end());
        changed = true;
      } else if (IsEmptyConjunction(c)) {
        changed = true;
      } else {
        flat.push_back(c);
      }
    }
    if (flat.size() == 1) return flat.front();
    return changed ? WithChildren(root, std::move(flat)) : root;
  }
  if (root->kind() == NodeKind::kSelect) {
    std::vector<NodePtr> kept;
    for (const NodePtr& c : children) {
      if ((c->kind() == NodeKind::kWhere || c->kind() == NodeKind::kHaving) &&
          c->size() == 1 && IsEmptyConjunction(c->child(0))) {
        changed = true;
        continue;
      }
      kept.push_back(c);
    }
    return changed ? WithChildren(root, std::move(kept)) : root;
  }
  return changed ? WithChildren(root, std::move(children)) : root;
}

void CollectVariables(const NodePtr& root, std::vector<VarOccurrence>* out) {
  VisitPreorder(root, [out](const NodePtr& n, const Path&) {
    if (n->kind() == NodeKind::kVarElem) out->push_back({n->text(), false});
    if (n->kind() == NodeKind::kVarSet) out->push_back({n->text(), true});
    return true;
  });
}

std::string TableAliasOrName(const NodePtr& table) {
  if (!table) return "";
  switch (table->kind()) {
    case NodeKind::kTableRef:
      if (!table->alias().empty()) return table->alias();
      if (table->size() > 0) return table->children().back()->text();
      return "";
    case NodeKind::kAlias:
      return table->alias();
    case NodeKind::kIdentifier:
      return table->text();
    case NodeKind::kColumnRef:
      if (table->size() > 0) return table->children().back()->text();
      return "";
    default:
      return table->text();
  }
}

const char* FragmentLevelName(FragmentLevel level) {
  switch (level) {
    case FragmentLevel::kStatement: return "statement";
    case FragmentLevel::kPredicate: return "predicate";
    case FragmentLevel::kExpression: return "expression";
  }
  return "expression";
}

FragmentLevel LevelOf(const NodePtr& root) {
  switch (root->kind()) {
    case NodeKind::kSelect:
    case NodeKind::kSetOp:
      return FragmentLevel::kStatement;
    case NodeKind::kConjunction:
    case NodeKind::kBetween:
    case NodeKind::kInList:
      return FragmentLevel::kPredicate;
    case NodeKind::kBinaryOp:
      return IsComparisonOp(root->text()) ? FragmentLevel::kPredicate
                                          : FragmentLevel::kExpression;
    case NodeKind::kUnaryOp:
      return (root->text() == "-" || root->text() == "+")
                 ? FragmentLevel::kExpression
                 : FragmentLevel::kPredicate;
    default:
      return IsClauseKind(root->kind()) ? FragmentLevel::kStatement
                                        : FragmentLevel::kExpression;
  }
}

}  // namespace qb::sql
