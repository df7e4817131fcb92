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

#include "qb/varsql/procedures.h"

#include <string>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "qb/sql/lexer.h"
#include "qb/status.h"

namespace qb::varsql {
namespace {

using sql::NodeKind;
using sql::NodePtr;

const std::vector<ProcedureInfo>& Constraints() {
  static const auto* kTable = new std::vector<ProcedureInfo>{
      {"UNIQUE", 2, true, "column a of table t is unique or a primary key"},
      {"NOT_NULL", 2, true, "column a of table t is declared not null"},
      {"IS_COLUMN", 1, false, "x is a column reference"},
      {"IS_LITERAL", 1, false, "x is a literal value"},
      {"IS_STRING", 1, false, "x is a string literal"},
      {"IS_NUMBER", 1, false, "x is a numeric literal"},
      {"IS_TABLE", 1, false, "x is a table reference"},
      {"SAME", 2, false, "x and y denote the same table or fragment"},
  };
  return *kTable;
}

const std::vector<ProcedureInfo>& Actions() {
  static const auto* kTable = new std::vector<ProcedureInfo>{
      {"Substitute", 3,  false,
       "rewrite column qualifiers naming table `from` to `to` within scope s"},
  };
  return *kTable;
}

const ProcedureInfo* Find(const std::vector<ProcedureInfo>& table,
                          std::string_view name) {
  for (const ProcedureInfo& p : table) {
    if (absl::EqualsIgnoreCase(p.name, absl::string_view(name.data(),
                                                         name.size()))) {
      return &p;
    }
  }
  return nullptr;
}

// A bound value: a single node, a node list, or template text.
struct Value {
  enum class Kind { kNode, kList, kText } kind = Kind::kText;
  NodePtr node;
  std::vector<NodePtr> list;
  std::string text;
};

absl::StatusOr<Value> Resolve(const ProcArg& arg,
                              const rewrite::Binding& binding) {
  Value v;
  if (arg.kind != ProcArg::Kind::kVariable) {
    v.kind = Value::Kind::kText;
    v.text = arg.text;
    return v;
  }
  if (auto it = binding.element.find(arg.text); it != binding.element.end()) {
    v.kind = Value::Kind::kNode;
    v.node = it->second;
    return v;
  }
  if (auto it = binding.set.find(arg.text); it != binding.set.end()) {
    v.kind = Value::Kind::kList;
    v.list = it->second;
    return v;
  }
  if (auto it = binding.string_parts.find(arg.text);
      it != binding.string_parts.end()) {
    v.kind = Value::Kind::kText;
    v.text = it->second;
    return v;
  }
  return MakeError(ErrorKind::kUnboundVariable,
                   "variable '" + arg.text + "' is not bound");
}

std::string NameOf(const Value& v, bool table) {
  if (v.kind == Value::Kind::kText) return v.text;
  if (v.kind == Value::Kind::kList) {
    return v.list.size() == 1
               ? (table ? TableNameOf(v.list[0]) : ColumnNameOf(v.list[0]))
               : "";
  }
  return table ? TableNameOf(v.node) : ColumnNameOf(v.node);
}

bool SameValue(const Value& a, const Value& b) {
  if (a.kind == Value::Kind::kNode && b.kind == Value::Kind::kNode) {
    return sql::Equal(a.node, b.node);
  }
  if (a.kind == Value::Kind::kList && b.kind == Value::Kind::kList) {
    return sql::EqualLists(a.list, b.list);
  }
  if (a.kind == Value::Kind::kText && b.kind == Value::Kind::kText) {
    return a.text == b.text;
  }
  // Text against a string literal node.
  const Value& t = a.kind == Value::Kind::kText ? a : b;
  const Value& n = a.kind == Value::Kind::kText ? b : a;
  return n.kind == Value::Kind::kNode &&
         n.node->kind() == NodeKind::kLiteral && n.node->text() == t.text;
}

NodePtr SubstituteQualifier(const NodePtr& node, const std::string& from,
                            const NodePtr& to_ident) {
  if (node->kind() == NodeKind::kColumnRef && node->size() >= 2) {
    const NodePtr& qual = node->child(node->size() - 2);
    if (qual->kind() == NodeKind::kIdentifier &&
        absl::EqualsIgnoreCase(qual->text(), from)) {
      std::vector<NodePtr> parts = node->children();
      parts[parts.size() - 2] = to_ident;
      return sql::WithChildren(node, std::move(parts));
    }
    return node;
  }
  std::vector<NodePtr> kids;
  kids.reserve(node->size());
  for (const NodePtr& c : node->children()) {
    kids.push_back(SubstituteQualifier(c, from, to_ident));
  }
  return sql::WithChildren(node, std::move(kids));
}

// Finds `nodes` (by identity) as a contiguous run of some child list.
bool FindRun(const NodePtr& root, const std::vector<NodePtr>& nodes,
             sql::Path* path, size_t* start) {
  bool found = false;
  sql::VisitPreorder(root, [&](const NodePtr& n, const sql::Path& p) {
    if (found) return false;
    const auto& kids = n->children();
    for (size_t i = 0; i + nodes.size() <= kids.size(); ++i) {
      bool all = true;
      for (size_t j = 0; j < nodes.size() && all; ++j) {
        all = kids[i + j] == nodes[j];
      }
      if (all) {
        *path = p;
        *start = i;
        found = true;
        return false;
      }
    }
    return true;
  });
  return found;
}

}  // namespace

bool CallsEqual(const ProcedureCall& a, const ProcedureCall& b) {
  if (!absl::EqualsIgnoreCase(a.name, b.name)) return false;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (a.args[i].kind != b.args[i].kind || a.args[i].text != b.args[i].text) {
      return false;
    }
  }
  return true;
}

std::string FormatCall(const ProcedureCall& call) {
  std::string out = call.name + "(";
  for (size_t i = 0; i < call.args.size(); ++i) {
    if (i) out += ", ";
    const ProcArg& a = call.args[i];
    if (a.kind == ProcArg::Kind::kString) {
      out += sql::QuoteString(a.text, sql::Dialect::kGeneric);
    } else {
      out += a.text;
    }
  }
  return out + ")";
}

const std::vector<ProcedureInfo>& ConstraintRegistry() { return Constraints(); }
const std::vector<ProcedureInfo>& ActionRegistry() { return Actions(); }

const ProcedureInfo* FindConstraint(std::string_view name) {
  return Find(Constraints(), name);
}

const ProcedureInfo* FindAction(std::string_view name) {
  return Find(Actions(), name);
}

std::string TableNameOf(const NodePtr& node) {
  if (!node) return "";
  switch (node->kind()) {
    case NodeKind::kTableRef:
      return node->size() ? node->children().back()->text() : "";
    case NodeKind::kIdentifier:
    case NodeKind::kLiteral:
      return node->text();
    case NodeKind::kColumnRef:
      return node->size() ? node->children().back()->text() : "";
    default:
      return "";
  }
}

std::string ColumnNameOf(const NodePtr& node) {
  if (!node) return "";
  switch (node->kind()) {
    case NodeKind::kColumnRef:
      return node->size() ? node->children().back()->text() : "";
    case NodeKind::kIdentifier:
    case NodeKind::kLiteral:
      return node->text();
    default:
      return "";
  }
}

absl::StatusOr<bool> EvalConstraint(const ConstraintExpr& expr,
                                    const rewrite::Binding& binding,
                                    const sql::SchemaCatalog* schema) {
  const ProcedureInfo* info = FindConstraint(expr.name);
  if (!info) {
    return MakeError(ErrorKind::kUnknownProcedure,
                     "unknown constraint '" + expr.name + "'");
  }
  if (static_cast<int>(expr.args.size()) != info->arity) {
    return MakeError(ErrorKind::kInvalidArgument,
                     std::string(info->name) + " expects " +
                         std::to_string(info->arity) + " arguments");
  }
  std::vector<Value> vals;
  for (const ProcArg& a : expr.args) {
    auto v = Resolve(a, binding);
    if (!v.ok()) return v.status();
    vals.push_back(*std::move(v));
  }
  if (info->needs_schema && schema == nullptr) {
    return MakeError(ErrorKind::kMissingSchema,
                     std::string(info->name) + " needs a schema catalog");
  }
  std::string name = info->name;
  auto node_kind = [&](NodeKind k) {
    return vals[0].kind == Value::Kind::kNode && vals[0].node->kind() == k;
  };
  if (name == "UNIQUE") {
    return schema->IsUnique(NameOf(vals[0], true), NameOf(vals[1], false));
  }
  if (name == "NOT_NULL") {
    return schema->IsNotNull(NameOf(vals[0], true), NameOf(vals[1], false));
  }
  if (name == "IS_COLUMN") {
    return node_kind(NodeKind::kColumnRef) || node_kind(NodeKind::kIdentifier);
  }
  if (name == "IS_LITERAL") {
    return node_kind(NodeKind::kLiteral) || node_kind(NodeKind::kTypedLiteral);
  }
  if (name == "IS_STRING") {
    if (vals[0].kind == Value::Kind::kText) {
      return expr.args[0].kind == ProcArg::Kind::kVariable ||
             expr.args[0].kind == ProcArg::Kind::kString;
    }
    return node_kind(NodeKind::kLiteral) &&
           vals[0].node->literal() == sql::LiteralType::kString;
  }
  if (name == "IS_NUMBER") {
    return node_kind(NodeKind::kLiteral) &&
           vals[0].node->literal() == sql::LiteralType::kNumber;
  }
  if (name == "IS_TABLE") return node_kind(NodeKind::kTableRef);
  if (name == "SAME") {
    const Value& a = vals[0];
    const Value& b = vals[1];
    if (a.kind == Value::Kind::kNode && b.kind == Value::Kind::kNode &&
        a.node->kind() == NodeKind::kTableRef &&
        b.node->kind() == NodeKind::kTableRef) {
      return sql::EqualLists(a.node->children(), b.node->children());
    }
    return SameValue(a, b);
  }
  return MakeError(ErrorKind::kUnknownProcedure,
                   "constraint '" + name + "' has no implementation");
}

absl::StatusOr<NodePtr> ApplyAction(const ActionExpr& expr,
                                    const NodePtr& tree,
                                    rewrite::Binding* binding) {
  const ProcedureInfo* info = FindAction(expr.name);
  if (!info) {
    return MakeError(ErrorKind::kUnknownProcedure,
                     "unknown action '" + expr.name + "'");
  }
  if (static_cast<int>(expr.args.size()) != info->arity) {
    return MakeError(ErrorKind::kInvalidArgument,
                     std::string(info->name) + " expects " +
                         std::to_string(info->arity) + " arguments");
  }
  // Substitute(s, from, to).
  const ProcArg& scope = expr.args[0];
  if (scope.kind != ProcArg::Kind::kVariable) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "Substitute scope must be a variable");
  }
  auto from = Resolve(expr.args[1], *binding);
  if (!from.ok()) return from.status();
  auto to = Resolve(expr.args[2], *binding);
  if (!to.ok()) return to.status();
  std::string from_name =
      from->kind == Value::Kind::kNode ? sql::TableAliasOrName(from->node)
                                       : from->text;
  std::string to_name = to->kind == Value::Kind::kNode
                            ? sql::TableAliasOrName(to->node)
                            : to->text;
  bool to_quoted = to->kind == Value::Kind::kNode &&
                   ((to->node->kind() == NodeKind::kTableRef &&
                     !to->node->alias().empty())
                        ? to->node->has_flag(sql::kAliasQuoted)
                        : (to->node->size() > 0
                               ? to->node->children().back()->has_flag(
                                     sql::kQuoted)
                               : to->node->has_flag(sql::kQuoted)));
  NodePtr to_ident = sql::MakeIdentifier(to_name, to_quoted);

  std::vector<NodePtr> region;
  bool is_set = false;
  if (auto it = binding->element.find(scope.text);
      it != binding->element.end()) {
    region = {it->second};
  } else if (auto it2 = binding->set.find(scope.text);
             it2 != binding->set.end()) {
    region = it2->second;
    is_set = true;
  } else {
    return MakeError(ErrorKind::kUnboundVariable,
                     "variable '" + scope.text + "' is not bound");
  }
  if (region.empty()) return tree;

  std::vector<NodePtr> rewritten;
  for (const NodePtr& n : region) {
    rewritten.push_back(SubstituteQualifier(n, from_name, to_ident));
  }
  NodePtr out;
  if (region.size() == 1 && tree == region[0]) {
    out = rewritten[0];
  } else {
    sql::Path path;
    size_t start = 0;
    if (!FindRun(tree, region, &path, &start)) {
      return MakeError(ErrorKind::kScopeNotFound,
                       "scope '" + scope.text +
                           "' does not occur in the replacement");
    }
    NodePtr parent = sql::NodeAt(tree, path);
    std::vector<NodePtr> kids = parent->children();
    for (size_t j = 0; j < rewritten.size(); ++j) kids[start + j] = rewritten[j];
    out = sql::ReplaceAt(tree, path, sql::WithChildren(parent, std::move(kids)));
  }
  if (is_set) {
    binding->set[scope.text] = rewritten;
  } else {
    binding->element[scope.text] = rewritten[0];
  }
  return out;
}

}  // namespace qb::varsql
