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

#include "qb/sql/serializer.h"

#include <string>

#include "qb/sql/lexer.h"

namespace qb::sql {
namespace {

constexpr int kPrimary = 11;

class Writer {
 public:
  explicit Writer(Dialect dialect) : dialect_(dialect) {}

  std::string Node(const NodePtr& n) {
    switch (n->kind()) {
      case NodeKind::kSelect:
        return Select(n);
      case NodeKind::kSetOp: {
        std::string op = n->text();
        if (n->has_flag(kSetAll)) op += " ALL";
        std::string right = Node(n->child(1));
        if (n->child(1)->kind() == NodeKind::kSetOp) right = "(" + right + ")";
        return Node(n->child(0)) + " " + op + " " + right;
      }
      case NodeKind::kSelectList:
        return std::string("SELECT ") +
               (n->has_flag(kDistinct) ? "DISTINCT " : "") + List(n);
      case NodeKind::kFrom:
        return "FROM " + List(n);
      case NodeKind::kWhere:
        return "WHERE " + Node(n->child(0));
      case NodeKind::kGroupBy:
        return "GROUP BY " + List(n);
      case NodeKind::kHaving:
        return "HAVING " + Node(n->child(0));
      case NodeKind::kOrderBy:
        return "ORDER BY " + List(n);
      case NodeKind::kLimit:
        if (n->has_flag(kOffsetOnly)) return "OFFSET " + Node(n->child(0));
        if (n->size() == 2) {
          return "LIMIT " + Node(n->child(0)) + " OFFSET " + Node(n->child(1));
        }
        return "LIMIT " + Node(n->child(0));
      case NodeKind::kTableRef: {
        std::string out = Joined(n, ".");
        if (!n->alias().empty()) {
          out += " " + Name(n->alias(), n->has_flag(kAliasQuoted));
        }
        return out;
      }
      case NodeKind::kJoin: {
        std::string right = Node(n->child(1));
        if (n->child(1)->kind() == NodeKind::kJoin) right = "(" + right + ")";
        std::string out = Node(n->child(0)) + " " + n->text() + " " + right;
        if (n->size() > 2) {
          const NodePtr& cond = n->child(2);
          if (cond->kind() == NodeKind::kUsing) {
            out += " USING (" + List(cond) + ")";
          } else {
            out += " ON " + Node(cond);
          }
        }
        return out;
      }
      case NodeKind::kUsing:
        return List(n);
      case NodeKind::kAlias:
        return Node(n->child(0)) + " AS " +
               Name(n->alias(), n->has_flag(kAliasQuoted));
      case NodeKind::kOrderItem: {
        std::string out = Node(n->child(0));
        if (!n->text().empty()) out += " " + n->text();
        return out;
      }
      case NodeKind::kColumnRef:
        return Joined(n, ".");
      case NodeKind::kIdentifier:
        return Name(n->text(), n->has_flag(kQuoted));
      case NodeKind::kLiteral:
        if (n->literal() == LiteralType::kString) {
          return QuoteString(n->text(), dialect_);
        }
        return n->text();
      case NodeKind::kTypedLiteral:
        return n->text() + " " + Node(n->child(0));
      case NodeKind::kInterval: {
        std::string out = "INTERVAL " + Operand(n->child(0), 10);
        if (!n->text().empty()) out += " " + n->text();
        return out;
      }
      case NodeKind::kFuncCall: {
        std::string name = n->has_flag(kQuoted)
                               ? QuoteIdentifier(n->text(), dialect_)
                               : n->text();
        std::string out = name + "(";
        if (n->has_flag(kDistinct)) out += "DISTINCT ";
        if (n->has_flag(kFromSyntax) && n->size() == 2) {
          out += Node(n->child(0)) + " FROM " + Node(n->child(1));
        } else {
          out += List(n);
        }
        return out + ")";
      }
      case NodeKind::kCast:
        return "CAST(" + Node(n->child(0)) + " AS " + n->text() + ")";
      case NodeKind::kBinaryOp: {
        int p = Precedence(n);
        return Operand(n->child(0), p) + " " + n->text() + " " +
               Operand(n->child(1), p + 1);
      }
      case NodeKind::kUnaryOp: {
        const std::string& op = n->text();
        if (n->has_flag(kPostfix)) {
          return Operand(n->child(0), Precedence(n) + 1) + " " + op;
        }
        if (op == "EXISTS") return "EXISTS " + Node(n->child(0));
        if (op == "NOT") return "NOT " + Operand(n->child(0), Precedence(n));
        std::string operand = Operand(n->child(0), Precedence(n));
        if (!operand.empty() && (operand[0] == '-' || operand[0] == '+')) {
          return op + " " + operand;
        }
        return op + operand;
      }
      case NodeKind::kConjunction: {
        int p = Precedence(n);
        std::string out;
        for (size_t i = 0; i < n->size(); ++i) {
          if (i) out += " " + n->text() + " ";
          out += Operand(n->child(i), p + 1);
        }
        return out;
      }
      case NodeKind::kBetween:
        return Operand(n->child(0), 7) +
               (n->has_flag(kNegated) ? " NOT BETWEEN " : " BETWEEN ") +
               Operand(n->child(1), 7) + " AND " + Operand(n->child(2), 7);
      case NodeKind::kInList: {
        std::string out = Operand(n->child(0), 7) +
                          (n->has_flag(kNegated) ? " NOT IN " : " IN ");
        if (n->size() == 2 && n->child(1)->kind() == NodeKind::kSubquery) {
          return out + Node(n->child(1));
        }
        out += "(";
        for (size_t i = 1; i < n->size(); ++i) {
          if (i > 1) out += ", ";
          out += Node(n->child(i));
        }
        return out + ")";
      }
      case NodeKind::kCase: {
        std::string out = "CASE";
        for (const NodePtr& c : n->children()) out += " " + Node(c);
        return out + " END";
      }
      case NodeKind::kWhen:
        return "WHEN " + Node(n->child(0)) + " THEN " + Node(n->child(1));
      case NodeKind::kElse:
        return "ELSE " + Node(n->child(0));
      case NodeKind::kSubquery:
        return "(" + Node(n->child(0)) + ")";
      case NodeKind::kStar:
        return "*";
      case NodeKind::kKeyword:
      case NodeKind::kRaw:
      case NodeKind::kTemplateText:
        return n->text();
      case NodeKind::kVarElem:
        return "<" + n->text() + ">";
      case NodeKind::kVarSet:
        return "<<" + n->text() + ">>";
      case NodeKind::kStringTemplate: {
        std::string body;
        for (const NodePtr& seg : n->children()) {
          if (seg->kind() == NodeKind::kVarElem) {
            body += "<" + seg->text() + ">";
          } else {
            body += seg->text();
          }
        }
        return QuoteString(body, dialect_);
      }
    }
    return "";
  }

 private:
  std::string Select(const NodePtr& n) {
    std::string out;
    for (const NodePtr& c : n->children()) {
      if (!out.empty()) out += " ";
      out += Node(c);
    }
    return out;
  }

  std::string List(const NodePtr& n) {
    std::string out;
    for (size_t i = 0; i < n->size(); ++i) {
      if (i) out += ", ";
      out += Node(n->child(i));
    }
    return out;
  }

  std::string Joined(const NodePtr& n, const char* sep) {
    std::string out;
    for (size_t i = 0; i < n->size(); ++i) {
      if (i) out += sep;
      out += Node(n->child(i));
    }
    return out;
  }

  std::string Name(const std::string& name, bool quoted) {
    return quoted ? QuoteIdentifier(name, dialect_) : name;
  }

  // Wraps `child` in parentheses when it binds looser than `min_prec`.
  std::string Operand(const NodePtr& child, int min_prec) {
    std::string s = Node(child);
    if (Precedence(child) < min_prec) return "(" + s + ")";
    return s;
  }

  Dialect dialect_;
};

}  // namespace

int Precedence(const NodePtr& n) {
  switch (n->kind()) {
    case NodeKind::kConjunction:
      return n->text() == "OR" ? 1 : 2;
    case NodeKind::kUnaryOp: {
      const std::string& op = n->text();
      if (op == "NOT") return 3;
      if (n->has_flag(kPostfix)) return 4;
      if (op == "EXISTS") return kPrimary;
      return 10;
    }
    case NodeKind::kBinaryOp: {
      const std::string& op = n->text();
      if (op == "IS DISTINCT FROM" || op == "IS NOT DISTINCT FROM") return 4;
      if (op == "=" || op == "<>" || op == "<" || op == ">" || op == "<=" ||
          op == ">=") {
        return 5;
      }
      if (op == "||") return 7;
      if (op == "+" || op == "-") return 8;
      if (op == "*" || op == "/" || op == "%") return 9;
      return 6;
    }
    case NodeKind::kBetween:
    case NodeKind::kInList:
      return 6;
    default:
      return kPrimary;
  }
}

std::string Serialize(const NodePtr& node, Dialect dialect) {
  if (!node) return "";
  Writer w(dialect);
  return w.Node(node);
}

}  // namespace qb::sql
