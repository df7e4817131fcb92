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

#include "qb/sql/parser.h"

#include <string>
#include <utility>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "qb/sql/lexer.h"
#include "qb/status.h"

namespace qb::sql {
namespace {

const char* const kReserved[] = {
    "SELECT", "FROM",   "WHERE",     "GROUP",  "BY",      "HAVING",
    "ORDER",  "LIMIT",  "OFFSET",    "UNION",  "INTERSECT", "EXCEPT",
    "ALL",    "DISTINCT", "AND",     "OR",     "NOT",     "AS",
    "ON",     "JOIN",   "INNER",     "LEFT",   "RIGHT",   "FULL",
    "OUTER",  "CROSS",  "NATURAL",   "USING",  "IN",      "IS",
    "NULL",   "LIKE",   "ILIKE",     "BETWEEN", "EXISTS", "CASE",
    "WHEN",   "THEN",   "ELSE",      "END",    "TRUE",    "FALSE",
    "CAST",   "INTERVAL", "WITH",    "ASC",    "DESC",    "INSERT",
    "UPDATE", "DELETE", "NULLS",     "SIMILAR", "REGEXP", "RLIKE",
    "WINDOW", "FETCH",  "FOR",       "OVER"};

const char* const kUnsupported[] = {
    "INSERT", "UPDATE", "DELETE",   "CREATE", "DROP",  "ALTER",
    "TRUNCATE", "MERGE", "REPLACE", "GRANT",  "REVOKE", "SET",
    "USE",    "BEGIN",  "COMMIT",   "ROLLBACK", "CALL", "EXPLAIN",
    "SHOW",   "COPY",   "VACUUM",   "ANALYZE", "DESCRIBE", "LOCK"};

const char* const kIntervalUnits[] = {
    "YEAR",   "YEARS",   "MONTH",  "MONTHS",  "WEEK",   "WEEKS",
    "DAY",    "DAYS",    "HOUR",   "HOURS",   "MINUTE", "MINUTES",
    "SECOND", "SECONDS", "QUARTER", "MICROSECOND", "MILLISECOND",
    "MICROSECONDS", "MILLISECONDS"};

bool IsReservedWord(const std::string& word) {
  for (const char* k : kReserved) {
    if (absl::EqualsIgnoreCase(word, k)) return true;
  }
  return false;
}

bool InList(const std::string& word, const char* const* list, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (absl::EqualsIgnoreCase(word, list[i])) return true;
  }
  return false;
}

std::string Upper(const std::string& s) { return absl::AsciiStrToUpper(s); }

bool IsTemplateVarStart(const std::string& s, size_t i, size_t* name_len) {
  if (s[i] != '<' || i + 1 >= s.size()) return false;
  char c = s[i + 1];
  if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
    return false;
  }
  size_t j = i + 1;
  while (j < s.size() &&
         (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) {
    ++j;
  }
  if (j >= s.size() || s[j] != '>') return false;
  *name_len = j - i - 1;
  return true;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, Dialect dialect, bool pattern_mode,
         bool flatten)
      : toks_(std::move(tokens)),
        dialect_(dialect),
        pattern_(pattern_mode),
        flatten_(flatten) {}

  absl::StatusOr<NodePtr> ParseQueryTop() {
    if (Peek().type == TokenType::kIdent &&
        InList(Peek().text, kUnsupported, std::size(kUnsupported))) {
      return MakeError(ErrorKind::kUnsupportedStatement,
                       "unsupported statement '" + Upper(Peek().text) +
                           "': only SELECT queries are handled",
                       Peek().pos);
    }
    NodePtr stmt;
    if (PeekKw("WITH")) {
      stmt = ParseRawStatement();
    } else if (PeekKw("SELECT") || PeekOp("(")) {
      stmt = ParseSetExpr();
    } else {
      Fail("expected SELECT");
    }
    if (!stmt) return error_;
    AcceptOp(";");
    if (Peek().type != TokenType::kEnd) {
      Fail("unexpected '" + Peek().text + "'");
      return error_;
    }
    return stmt;
  }

  absl::StatusOr<Pattern> ParsePatternTop() {
    Pattern out;
    if (Peek().type == TokenType::kIdent &&
        InList(Peek().text, kUnsupported, std::size(kUnsupported)) &&
        !PeekOp("(", 1)) {
      return MakeError(ErrorKind::kUnsupportedStatement,
                       "unsupported statement '" + Upper(Peek().text) + "'",
                       Peek().pos);
    }
    NodePtr root;
    if (PeekKw("WITH")) {
      root = ParseRawStatement();
    } else if (PeekKw("SELECT") || (PeekOp("(") && PeekKw("SELECT", 1))) {
      root = ParseSetExpr();
    } else if (PeekKw("FROM") || PeekKw("WHERE") || PeekKw("GROUP") ||
               PeekKw("HAVING") || PeekKw("ORDER") || PeekKw("LIMIT") ||
               PeekKw("OFFSET")) {
      root = ParseSelectCore(/*partial_ok=*/true);
    } else {
      root = ParseExpr();
    }
    if (!root) return error_;
    AcceptOp(";");
    if (Peek().type != TokenType::kEnd) {
      Fail("unexpected '" + Peek().text + "'");
      return error_;
    }
    out.root = root;
    out.level = LevelOf(root);
    return out;
  }

 private:
  const Token& Peek(size_t k = 0) const {
    size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& Next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool PeekKw(const char* kw, size_t k = 0) const {
    const Token& t = Peek(k);
    return t.type == TokenType::kIdent && absl::EqualsIgnoreCase(t.text, kw);
  }
  bool PeekOp(const char* op, size_t k = 0) const {
    const Token& t = Peek(k);
    return t.type == TokenType::kOp && t.text == op;
  }
  bool AcceptKw(const char* kw) {
    if (!PeekKw(kw)) return false;
    Next();
    return true;
  }
  bool AcceptOp(const char* op) {
    if (!PeekOp(op)) return false;
    Next();
    return true;
  }
  bool ExpectKw(const char* kw) {
    if (AcceptKw(kw)) return true;
    Fail(std::string("expected ") + kw);
    return false;
  }
  bool ExpectOp(const char* op) {
    if (AcceptOp(op)) return true;
    Fail(std::string("expected '") + op + "'");
    return false;
  }
  std::nullptr_t Fail(const std::string& message) {
    if (error_.ok()) {
      const Token& t = Peek();
      std::string near = t.type == TokenType::kEnd ? "end of input"
                                                   : "'" + t.text + "'";
      error_ = MakeError(ErrorKind::kParseError,
                         message + " near " + near + " at position " +
                             std::to_string(t.pos),
                         t.pos);
    }
    return nullptr;
  }

  bool IsAliasToken(const Token& t) const {
    if (t.type == TokenType::kQuotedIdent) return true;
    return t.type == TokenType::kIdent && !IsReservedWord(t.text);
  }

  // WITH queries and other unsupported shapes are kept verbatim.
  NodePtr ParseRawStatement() {
    size_t start = pos_;
    int depth = 0;
    while (Peek().type != TokenType::kEnd) {
      if (depth == 0 && PeekOp(";")) break;
      if (PeekOp("(")) ++depth;
      if (PeekOp(")")) --depth;
      Next();
    }
    return Node::Make(NodeKind::kRaw, RenderRange(start, pos_), {});
  }

  std::string RenderRange(size_t from, size_t to) const {
    std::string out;
    for (size_t i = from; i < to; ++i) {
      const Token& t = toks_[i];
      bool glue = false;
      if (i > from) {
        const Token& prev = toks_[i - 1];
        bool prev_open = prev.type == TokenType::kOp &&
                         (prev.text == "(" || prev.text == ".");
        bool cur_close = t.type == TokenType::kOp &&
                         (t.text == ")" || t.text == "," || t.text == ".");
        bool call = t.type == TokenType::kOp && t.text == "(" &&
                    (prev.type == TokenType::kIdent ||
                     prev.type == TokenType::kQuotedIdent) &&
                    !IsReservedWord(prev.text);
        glue = prev_open || cur_close || call;
        if (!glue) out += ' ';
      }
      if (t.type == TokenType::kIdent && IsReservedWord(t.text)) {
        out += Upper(t.text);
      } else {
        out += RenderToken(t, dialect_);
      }
    }
    return out;
  }

  NodePtr ParseSetExpr() {
    NodePtr left = ParseSelectTerm();
    if (!left) return nullptr;
    while (PeekKw("UNION") || PeekKw("INTERSECT") || PeekKw("EXCEPT")) {
      std::string op = Upper(Next().text);
      uint32_t flags = 0;
      if (AcceptKw("ALL")) {
        flags |= kSetAll;
      } else {
        AcceptKw("DISTINCT");
      }
      NodePtr right = ParseSelectTerm();
      if (!right) return nullptr;
      left = Node::Make(NodeKind::kSetOp, op, {left, right}, flags);
    }
    return left;
  }

  NodePtr ParseSelectTerm() {
    if (PeekOp("(")) {
      Next();
      NodePtr inner = ParseSetExpr();
      if (!inner || !ExpectOp(")")) return nullptr;
      return inner;
    }
    if (!PeekKw("SELECT")) return Fail("expected SELECT");
    return ParseSelectCore(/*partial_ok=*/false);
  }

  NodePtr ParseSelectCore(bool partial_ok) {
    std::vector<NodePtr> clauses;
    if (AcceptKw("SELECT")) {
      uint32_t flags = 0;
      if (AcceptKw("DISTINCT")) {
        flags |= kDistinct;
      } else {
        AcceptKw("ALL");
      }
      std::vector<NodePtr> items;
      do {
        NodePtr item = ParseSelectItem();
        if (!item) return nullptr;
        items.push_back(item);
      } while (AcceptOp(","));
      clauses.push_back(
          Node::Make(NodeKind::kSelectList, "", std::move(items), flags));
    } else if (!partial_ok) {
      return Fail("expected SELECT");
    }
    if (AcceptKw("FROM")) {
      std::vector<NodePtr> items;
      do {
        NodePtr item = ParseTableItem();
        if (!item) return nullptr;
        items.push_back(item);
      } while (AcceptOp(","));
      clauses.push_back(Node::Make(NodeKind::kFrom, "", std::move(items)));
    }
    if (AcceptKw("WHERE")) {
      NodePtr e = ParseExpr();
      if (!e) return nullptr;
      clauses.push_back(Node::Make(NodeKind::kWhere, "", {e}));
    }
    if (PeekKw("GROUP")) {
      Next();
      if (!ExpectKw("BY")) return nullptr;
      std::vector<NodePtr> items;
      do {
        NodePtr e = ParseExpr();
        if (!e) return nullptr;
        items.push_back(e);
      } while (AcceptOp(","));
      clauses.push_back(Node::Make(NodeKind::kGroupBy, "", std::move(items)));
    }
    if (AcceptKw("HAVING")) {
      NodePtr e = ParseExpr();
      if (!e) return nullptr;
      clauses.push_back(Node::Make(NodeKind::kHaving, "", {e}));
    }
    if (PeekKw("ORDER")) {
      Next();
      if (!ExpectKw("BY")) return nullptr;
      std::vector<NodePtr> items;
      do {
        NodePtr item = ParseOrderItem();
        if (!item) return nullptr;
        items.push_back(item);
      } while (AcceptOp(","));
      clauses.push_back(Node::Make(NodeKind::kOrderBy, "", std::move(items)));
    }
    if (PeekKw("LIMIT") || PeekKw("OFFSET")) {
      NodePtr limit = ParseLimit();
      if (!limit) return nullptr;
      clauses.push_back(limit);
    }
    if (clauses.empty()) return Fail("expected a clause");
    return Node::Make(NodeKind::kSelect, "", std::move(clauses));
  }

  NodePtr ParseLimit() {
    NodePtr count, offset;
    if (AcceptKw("LIMIT")) {
      count = ParseLimitValue();
      if (!count) return nullptr;
      if (AcceptOp(",")) {
        offset = count;
        count = ParseLimitValue();
        if (!count) return nullptr;
      }
    }
    if (!offset && AcceptKw("OFFSET")) {
      offset = ParseLimitValue();
      if (!offset) return nullptr;
      if (!AcceptKw("ROWS")) AcceptKw("ROW");
    }
    if (count && offset) {
      return Node::Make(NodeKind::kLimit, "", {count, offset});
    }
    if (count) return Node::Make(NodeKind::kLimit, "", {count});
    return Node::Make(NodeKind::kLimit, "", {offset}, kOffsetOnly);
  }

  NodePtr ParseLimitValue() {
    if (PeekKw("ALL")) {
      Next();
      return Node::Make(NodeKind::kKeyword, "ALL", {});
    }
    return ParseUnary();
  }

  NodePtr ParseOrderItem() {
    NodePtr e = ParseExpr();
    if (!e) return nullptr;
    std::string suffix;
    if (AcceptKw("ASC")) {
      suffix = "ASC";
    } else if (AcceptKw("DESC")) {
      suffix = "DESC";
    }
    if (AcceptKw("NULLS")) {
      std::string which;
      if (AcceptKw("FIRST")) {
        which = "FIRST";
      } else if (AcceptKw("LAST")) {
        which = "LAST";
      } else {
        return Fail("expected FIRST or LAST");
      }
      suffix += (suffix.empty() ? "" : " ") + std::string("NULLS ") + which;
    }
    return Node::Make(NodeKind::kOrderItem, suffix, {e});
  }

  NodePtr ParseSelectItem() {
    if (Peek().type == TokenType::kVarSet) {
      return MakeVarSet(Next().text);
    }
    NodePtr e;
    if (PeekOp("*")) {
      Next();
      e = Node::Make(NodeKind::kStar, "*", {});
    } else {
      e = ParseExpr();
      if (!e) return nullptr;
    }
    return MaybeAlias(e);
  }

  NodePtr MaybeAlias(const NodePtr& e) {
    bool explicit_as = AcceptKw("AS");
    if (IsAliasToken(Peek())) {
      const Token& t = Next();
      return Node::Make(NodeKind::kAlias, "", {e},
                        t.type == TokenType::kQuotedIdent ? kAliasQuoted : 0,
                        LiteralType::kNone, t.text);
    }
    if (explicit_as) return Fail("expected alias after AS");
    return e;
  }

  NodePtr ParseTableItem() {
    NodePtr left = ParseTablePrimary();
    if (!left) return nullptr;
    while (true) {
      std::string join;
      if (PeekKw("JOIN")) {
        Next();
        join = "JOIN";
      } else if (PeekKw("INNER") && PeekKw("JOIN", 1)) {
        Next();
        Next();
        join = "JOIN";
      } else if (PeekKw("LEFT") || PeekKw("RIGHT") || PeekKw("FULL")) {
        std::string side = Upper(Next().text);
        AcceptKw("OUTER");
        if (!ExpectKw("JOIN")) return nullptr;
        join = side + " JOIN";
      } else if (PeekKw("CROSS")) {
        Next();
        if (!ExpectKw("JOIN")) return nullptr;
        join = "CROSS JOIN";
      } else if (PeekKw("NATURAL")) {
        Next();
        std::string side;
        if (PeekKw("LEFT") || PeekKw("RIGHT") || PeekKw("FULL")) {
          side = Upper(Next().text) + " ";
          AcceptKw("OUTER");
        } else {
          AcceptKw("INNER");
        }
        if (!ExpectKw("JOIN")) return nullptr;
        join = "NATURAL " + side + "JOIN";
      } else {
        break;
      }
      NodePtr right = ParseTablePrimary();
      if (!right) return nullptr;
      std::vector<NodePtr> kids = {left, right};
      if (AcceptKw("ON")) {
        NodePtr cond = ParseExpr();
        if (!cond) return nullptr;
        kids.push_back(cond);
      } else if (AcceptKw("USING")) {
        if (!ExpectOp("(")) return nullptr;
        std::vector<NodePtr> cols;
        do {
          NodePtr id = ParseName();
          if (!id) return nullptr;
          cols.push_back(id);
        } while (AcceptOp(","));
        if (!ExpectOp(")")) return nullptr;
        kids.push_back(Node::Make(NodeKind::kUsing, "", std::move(cols)));
      }
      left = Node::Make(NodeKind::kJoin, join, std::move(kids));
    }
    return left;
  }

  NodePtr ParseName() {
    const Token& t = Peek();
    if (t.type == TokenType::kQuotedIdent) {
      Next();
      return MakeIdentifier(t.text, true);
    }
    if (t.type == TokenType::kIdent && !IsReservedWord(t.text)) {
      Next();
      return MakeIdentifier(t.text, false);
    }
    if (t.type == TokenType::kVarElem) {
      Next();
      return MakeVarElem(t.text);
    }
    return Fail("expected identifier");
  }

  NodePtr ParseTablePrimary() {
    if (Peek().type == TokenType::kVarSet) return MakeVarSet(Next().text);
    if (Peek().type == TokenType::kVarElem && !PeekOp(".", 1)) {
      return MakeVarElem(Next().text);
    }
    if (PeekOp("(")) {
      if (PeekKw("SELECT", 1) || PeekOp("(", 1)) {
        Next();
        NodePtr q = ParseSetExpr();
        if (!q || !ExpectOp(")")) return nullptr;
        NodePtr sub = Node::Make(NodeKind::kSubquery, "", {q});
        return MaybeAlias(sub);
      }
      Next();
      NodePtr inner = ParseTableItem();
      if (!inner || !ExpectOp(")")) return nullptr;
      return inner;
    }
    std::vector<NodePtr> parts;
    NodePtr first = ParseName();
    if (!first) return nullptr;
    parts.push_back(first);
    while (AcceptOp(".")) {
      NodePtr p = ParseName();
      if (!p) return nullptr;
      parts.push_back(p);
    }
    std::string alias;
    uint32_t flags = 0;
    bool explicit_as = AcceptKw("AS");
    if (IsAliasToken(Peek())) {
      const Token& t = Next();
      alias = t.text;
      if (t.type == TokenType::kQuotedIdent) flags |= kAliasQuoted;
    } else if (explicit_as) {
      return Fail("expected alias after AS");
    }
    return Node::Make(NodeKind::kTableRef, "", std::move(parts), flags,
                      LiteralType::kNone, alias);
  }

  // Expressions, lowest precedence first.
  NodePtr ParseExpr() { return ParseOr(); }

  NodePtr BuildConjunction(const std::string& conn, NodePtr left,
                           NodePtr right) {
    if (!flatten_) return MakeConjunction(conn, {left, right});
    std::vector<NodePtr> items;
    for (const NodePtr& side : {left, right}) {
      if (side->kind() == NodeKind::kConjunction && side->text() == conn) {
        items.insert(items.end(), side->children().begin(),
                     side->children().end());
      } else {
        items.push_back(side);
      }
    }
    return MakeConjunction(conn, std::move(items));
  }

  bool PeekOr() const {
    return PeekKw("OR") || (dialect_ == Dialect::kMySql && PeekOp("||"));
  }

  NodePtr ParseOr() {
    NodePtr left = ParseAnd();
    if (!left) return nullptr;
    while (PeekOr()) {
      Next();
      NodePtr right = ParseAnd();
      if (!right) return nullptr;
      left = BuildConjunction("OR", left, right);
    }
    return left;
  }

  NodePtr ParseAnd() {
    NodePtr left = ParseNot();
    if (!left) return nullptr;
    while (PeekKw("AND")) {
      Next();
      NodePtr right = ParseNot();
      if (!right) return nullptr;
      left = BuildConjunction("AND", left, right);
    }
    return left;
  }

  NodePtr ParseNot() {
    if (PeekKw("NOT") && !PeekKw("EXISTS", 1)) {
      Next();
      NodePtr e = ParseNot();
      if (!e) return nullptr;
      return Node::Make(NodeKind::kUnaryOp, "NOT", {e});
    }
    return ParseIs();
  }

  NodePtr ParseIs() {
    NodePtr left = ParseComparison();
    if (!left) return nullptr;
    while (PeekKw("IS")) {
      Next();
      bool neg = AcceptKw("NOT");
      std::string base = neg ? "IS NOT " : "IS ";
      if (AcceptKw("NULL")) {
        left = Node::Make(NodeKind::kUnaryOp, base + "NULL", {left}, kPostfix);
      } else if (AcceptKw("TRUE")) {
        left = Node::Make(NodeKind::kUnaryOp, base + "TRUE", {left}, kPostfix);
      } else if (AcceptKw("FALSE")) {
        left =
            Node::Make(NodeKind::kUnaryOp, base + "FALSE", {left}, kPostfix);
      } else if (AcceptKw("UNKNOWN")) {
        left = Node::Make(NodeKind::kUnaryOp, base + "UNKNOWN", {left},
                          kPostfix);
      } else if (AcceptKw("DISTINCT")) {
        if (!ExpectKw("FROM")) return nullptr;
        NodePtr right = ParseComparison();
        if (!right) return nullptr;
        left = Node::Make(NodeKind::kBinaryOp, base + "DISTINCT FROM",
                          {left, right});
      } else {
        return Fail("expected NULL, TRUE, FALSE or DISTINCT FROM after IS");
      }
    }
    return left;
  }

  NodePtr ParseComparison() {
    NodePtr left = ParseLike();
    if (!left) return nullptr;
    while (true) {
      const Token& t = Peek();
      if (t.type != TokenType::kOp) break;
      std::string op = t.text;
      if (op == "!=") op = "<>";
      if (op != "=" && op != "<>" && op != "<" && op != ">" && op != "<=" &&
          op != ">=") {
        break;
      }
      Next();
      NodePtr right = ParseLike();
      if (!right) return nullptr;
      left = Node::Make(NodeKind::kBinaryOp, op, {left, right});
    }
    return left;
  }

  NodePtr ParseLike() {
    NodePtr left = ParseOther();
    if (!left) return nullptr;
    while (true) {
      bool neg = false;
      size_t save = pos_;
      if (PeekKw("NOT") &&
          (PeekKw("BETWEEN", 1) || PeekKw("IN", 1) || PeekKw("LIKE", 1) ||
           PeekKw("ILIKE", 1) || PeekKw("SIMILAR", 1) || PeekKw("REGEXP", 1) ||
           PeekKw("RLIKE", 1))) {
        Next();
        neg = true;
      }
      if (AcceptKw("BETWEEN")) {
        NodePtr lo = ParseOther();
        if (!lo || !ExpectKw("AND")) return nullptr;
        NodePtr hi = ParseOther();
        if (!hi) return nullptr;
        left = Node::Make(NodeKind::kBetween, "", {left, lo, hi},
                          neg ? kNegated : 0);
      } else if (AcceptKw("IN")) {
        if (!ExpectOp("(")) return nullptr;
        std::vector<NodePtr> kids = {left};
        if (PeekKw("SELECT")) {
          NodePtr q = ParseSetExpr();
          if (!q) return nullptr;
          kids.push_back(Node::Make(NodeKind::kSubquery, "", {q}));
        } else {
          do {
            NodePtr e = ParseListItem();
            if (!e) return nullptr;
            kids.push_back(e);
          } while (AcceptOp(","));
        }
        if (!ExpectOp(")")) return nullptr;
        left = Node::Make(NodeKind::kInList, "", std::move(kids),
                          neg ? kNegated : 0);
      } else if (PeekKw("LIKE") || PeekKw("ILIKE") || PeekKw("REGEXP") ||
                 PeekKw("RLIKE")) {
        std::string op = Upper(Next().text);
        NodePtr right = ParseOther();
        if (!right) return nullptr;
        left = Node::Make(NodeKind::kBinaryOp, neg ? "NOT " + op : op,
                          {left, right});
      } else if (PeekKw("SIMILAR") && PeekKw("TO", 1)) {
        Next();
        Next();
        NodePtr right = ParseOther();
        if (!right) return nullptr;
        left = Node::Make(NodeKind::kBinaryOp,
                          neg ? "NOT SIMILAR TO" : "SIMILAR TO", {left, right});
      } else {
        pos_ = save;
        break;
      }
    }
    return left;
  }

  NodePtr ParseListItem() {
    if (Peek().type == TokenType::kVarSet) return MakeVarSet(Next().text);
    return ParseExpr();
  }

  NodePtr ParseOther() {
    NodePtr left = ParseAdditive();
    if (!left) return nullptr;
    while (dialect_ != Dialect::kMySql && PeekOp("||")) {
      Next();
      NodePtr right = ParseAdditive();
      if (!right) return nullptr;
      left = Node::Make(NodeKind::kBinaryOp, "||", {left, right});
    }
    return left;
  }

  NodePtr ParseAdditive() {
    NodePtr left = ParseMultiplicative();
    if (!left) return nullptr;
    while (PeekOp("+") || PeekOp("-")) {
      std::string op = Next().text;
      NodePtr right = ParseMultiplicative();
      if (!right) return nullptr;
      left = Node::Make(NodeKind::kBinaryOp, op, {left, right});
    }
    return left;
  }

  NodePtr ParseMultiplicative() {
    NodePtr left = ParseUnary();
    if (!left) return nullptr;
    while (PeekOp("*") || PeekOp("/") || PeekOp("%")) {
      std::string op = Next().text;
      NodePtr right = ParseUnary();
      if (!right) return nullptr;
      left = Node::Make(NodeKind::kBinaryOp, op, {left, right});
    }
    return left;
  }

  NodePtr ParseUnary() {
    if (PeekOp("-") || PeekOp("+")) {
      std::string op = Next().text;
      NodePtr e = ParseUnary();
      if (!e) return nullptr;
      return Node::Make(NodeKind::kUnaryOp, op, {e});
    }
    return ParsePostfix();
  }

  NodePtr ParsePostfix() {
    NodePtr e = ParsePrimary();
    if (!e) return nullptr;
    while (PeekOp("::")) {
      Next();
      std::string type = ParseTypeName();
      if (type.empty()) return nullptr;
      e = Node::Make(NodeKind::kCast, type, {e});
    }
    return e;
  }

  std::string ParseTypeName() {
    const Token& t = Peek();
    if (t.type != TokenType::kIdent) {
      Fail("expected type name");
      return "";
    }
    std::string type = Upper(Next().text);
    while (true) {
      if (PeekKw("PRECISION") || PeekKw("VARYING")) {
        type += " " + Upper(Next().text);
      } else if ((PeekKw("WITH") || PeekKw("WITHOUT")) && PeekKw("TIME", 1) &&
                 PeekKw("ZONE", 2)) {
        type += " " + Upper(Next().text);
        Next();
        Next();
        type += " TIME ZONE";
      } else {
        break;
      }
    }
    if (PeekOp("(")) {
      Next();
      std::vector<std::string> args;
      do {
        const Token& a = Peek();
        if (a.type != TokenType::kNumber && a.type != TokenType::kIdent) {
          Fail("expected type argument");
          return "";
        }
        args.push_back(Upper(Next().text));
      } while (AcceptOp(","));
      if (!ExpectOp(")")) return "";
      type += "(";
      for (size_t i = 0; i < args.size(); ++i) {
        if (i) type += ", ";
        type += args[i];
      }
      type += ")";
    }
    return type;
  }

  NodePtr MakeStringNode(const std::string& text) {
    if (!pattern_) return MakeString(text);
    std::vector<NodePtr> segs;
    std::string fixed;
    bool has_var = false;
    bool last_was_var = false;
    size_t i = 0;
    while (i < text.size()) {
      size_t len = 0;
      if (IsTemplateVarStart(text, i, &len)) {
        if (!fixed.empty()) {
          segs.push_back(Node::Make(NodeKind::kTemplateText, fixed, {}));
          fixed.clear();
        } else if (last_was_var) {
          return Fail("adjacent variables in a string template");
        }
        segs.push_back(MakeVarElem(text.substr(i + 1, len)));
        has_var = true;
        last_was_var = true;
        i += len + 2;
        continue;
      }
      fixed += text[i++];
      last_was_var = false;
    }
    if (!has_var) return MakeString(text);
    if (!fixed.empty()) {
      segs.push_back(Node::Make(NodeKind::kTemplateText, fixed, {}));
    }
    return Node::Make(NodeKind::kStringTemplate, "", std::move(segs));
  }

  bool IsFunctionName(const Token& t) const {
    if (t.type == TokenType::kQuotedIdent) return true;
    if (t.type != TokenType::kIdent) return false;
    if (!IsReservedWord(t.text)) return true;
    return absl::EqualsIgnoreCase(t.text, "LEFT") ||
           absl::EqualsIgnoreCase(t.text, "RIGHT");
  }

  NodePtr ParsePrimary() {
    const Token& t = Peek();
    switch (t.type) {
      case TokenType::kNumber:
        Next();
        return MakeNumber(t.text);
      case TokenType::kString: {
        std::string text = Next().text;
        return MakeStringNode(text);
      }
      case TokenType::kParam:
        Next();
        return Node::Make(NodeKind::kLiteral, t.text, {}, 0,
                          LiteralType::kParam);
      case TokenType::kVarSet:
        Next();
        return MakeVarSet(t.text);
      case TokenType::kVarElem:
        if (PeekOp(".", 1)) return ParseColumnRef();
        Next();
        return MakeVarElem(t.text);
      case TokenType::kEnd:
        return Fail("unexpected end of input");
      default:
        break;
    }
    if (PeekOp("(")) {
      Next();
      if (PeekKw("SELECT") || (PeekOp("(") && PeekKw("SELECT", 1))) {
        NodePtr q = ParseSetExpr();
        if (!q || !ExpectOp(")")) return nullptr;
        return Node::Make(NodeKind::kSubquery, "", {q});
      }
      NodePtr e = ParseExpr();
      if (!e) return nullptr;
      if (PeekOp(",")) {
        std::vector<NodePtr> items = {e};
        while (AcceptOp(",")) {
          NodePtr x = ParseExpr();
          if (!x) return nullptr;
          items.push_back(x);
        }
        if (!ExpectOp(")")) return nullptr;
        return Node::Make(NodeKind::kFuncCall, "", std::move(items));
      }
      if (!ExpectOp(")")) return nullptr;
      return e;
    }
    if (PeekOp("*")) {
      Next();
      return Node::Make(NodeKind::kStar, "*", {});
    }
    if (t.type == TokenType::kIdent) {
      if (AcceptKw("NULL")) {
        return Node::Make(NodeKind::kLiteral, "NULL", {}, 0,
                          LiteralType::kNull);
      }
      if (PeekKw("TRUE") || PeekKw("FALSE")) {
        return Node::Make(NodeKind::kLiteral, Upper(Next().text), {}, 0,
                          LiteralType::kBoolean);
      }
      if (PeekKw("CASE")) return ParseCase();
      if (PeekKw("CAST") && PeekOp("(", 1)) {
        Next();
        Next();
        NodePtr e = ParseExpr();
        if (!e || !ExpectKw("AS")) return nullptr;
        std::string type = ParseTypeName();
        if (type.empty() || !ExpectOp(")")) return nullptr;
        return Node::Make(NodeKind::kCast, type, {e});
      }
      if (PeekKw("EXISTS") || (PeekKw("NOT") && PeekKw("EXISTS", 1))) {
        bool neg = AcceptKw("NOT");
        Next();
        if (!ExpectOp("(")) return nullptr;
        NodePtr q = ParseSetExpr();
        if (!q || !ExpectOp(")")) return nullptr;
        NodePtr ex = Node::Make(NodeKind::kUnaryOp, "EXISTS",
                                {Node::Make(NodeKind::kSubquery, "", {q})});
        if (neg) return Node::Make(NodeKind::kUnaryOp, "NOT", {ex});
        return ex;
      }
      if (PeekKw("INTERVAL")) return ParseInterval();
      if ((PeekKw("DATE") || PeekKw("TIME") || PeekKw("TIMESTAMP")) &&
          Peek(1).type == TokenType::kString) {
        std::string type = Upper(Next().text);
        return Node::Make(NodeKind::kTypedLiteral, type,
                          {MakeString(Next().text)});
      }
    }
    if (IsFunctionName(t) && PeekOp("(", 1)) return ParseFuncCall();
    return ParseColumnRef();
  }

  NodePtr ParseInterval() {
    Next();
    NodePtr value;
    if (Peek().type == TokenType::kString) {
      value = MakeStringNode(Next().text);
    } else {
      value = ParseUnary();
      if (!value) return nullptr;
    }
    std::string unit;
    if (Peek().type == TokenType::kIdent &&
        InList(Peek().text, kIntervalUnits, std::size(kIntervalUnits))) {
      unit = Upper(Next().text);
    }
    return Node::Make(NodeKind::kInterval, unit, {value});
  }

  NodePtr ParseCase() {
    Next();
    std::vector<NodePtr> kids;
    uint32_t flags = 0;
    if (!PeekKw("WHEN")) {
      NodePtr operand = ParseExpr();
      if (!operand) return nullptr;
      kids.push_back(operand);
      flags |= kHasOperand;
    }
    bool any = false;
    while (AcceptKw("WHEN")) {
      NodePtr cond = ParseExpr();
      if (!cond || !ExpectKw("THEN")) return nullptr;
      NodePtr result = ParseExpr();
      if (!result) return nullptr;
      kids.push_back(Node::Make(NodeKind::kWhen, "", {cond, result}));
      any = true;
    }
    if (!any) return Fail("expected WHEN");
    if (AcceptKw("ELSE")) {
      NodePtr e = ParseExpr();
      if (!e) return nullptr;
      kids.push_back(Node::Make(NodeKind::kElse, "", {e}));
    }
    if (!ExpectKw("END")) return nullptr;
    return Node::Make(NodeKind::kCase, "", std::move(kids), flags);
  }

  NodePtr ParseFuncCall() {
    size_t start = pos_;
    const Token& name = Next();
    Next();  // (
    uint32_t flags = 0;
    std::vector<NodePtr> args;
    if (name.type == TokenType::kQuotedIdent) flags |= kQuoted;
    if (AcceptKw("DISTINCT")) flags |= kDistinct;
    if (!PeekOp(")")) {
      if (absl::EqualsIgnoreCase(name.text, "EXTRACT") &&
          Peek().type == TokenType::kIdent && PeekKw("FROM", 1)) {
        args.push_back(Node::Make(NodeKind::kKeyword, Upper(Next().text), {}));
        Next();
        NodePtr e = ParseExpr();
        if (!e) return nullptr;
        args.push_back(e);
        flags |= kFromSyntax;
      } else {
        do {
          NodePtr e = ParseListItem();
          if (!e) return nullptr;
          args.push_back(e);
        } while (AcceptOp(","));
      }
    }
    if (!ExpectOp(")")) return nullptr;
    if (PeekKw("OVER") || PeekKw("FILTER") || PeekKw("WITHIN")) {
      while (PeekKw("OVER") || PeekKw("FILTER") || PeekKw("WITHIN")) {
        Next();
        if (PeekKw("GROUP")) Next();
        if (PeekOp("(")) {
          int depth = 0;
          do {
            if (PeekOp("(")) ++depth;
            if (PeekOp(")")) --depth;
            if (Peek().type == TokenType::kEnd) {
              return Fail("unbalanced parentheses");
            }
            Next();
          } while (depth > 0);
        } else if (Peek().type == TokenType::kIdent) {
          Next();
        }
      }
      return Node::Make(NodeKind::kRaw, RenderRange(start, pos_), {});
    }
    return Node::Make(NodeKind::kFuncCall, name.text, std::move(args), flags);
  }

  NodePtr ParseColumnRef() {
    std::vector<NodePtr> parts;
    NodePtr first = ParseName();
    if (!first) return nullptr;
    parts.push_back(first);
    while (AcceptOp(".")) {
      if (PeekOp("*")) {
        Next();
        parts.push_back(Node::Make(NodeKind::kStar, "*", {}));
        break;
      }
      NodePtr p = ParseName();
      if (!p) return nullptr;
      parts.push_back(p);
    }
    return Node::Make(NodeKind::kColumnRef, "", std::move(parts));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  Dialect dialect_;
  bool pattern_;
  bool flatten_;
  absl::Status error_;
};

}  // namespace

absl::StatusOr<NodePtr> ParseQuery(std::string_view sql, Dialect dialect,
                                   const ParseOptions& options) {
  auto tokens = Tokenize(sql, dialect, /*pattern_mode=*/false);
  if (!tokens.ok()) return tokens.status();
  if (tokens->size() == 1) {
    return MakeError(ErrorKind::kParseError, "empty query at position 0", 0);
  }
  Parser parser(std::move(*tokens), dialect, false, options.flatten);
  return parser.ParseQueryTop();
}

absl::StatusOr<Pattern> ParsePattern(std::string_view text, Dialect dialect) {
  auto tokens = Tokenize(text, dialect, /*pattern_mode=*/true);
  if (!tokens.ok()) return tokens.status();
  if (tokens->size() == 1) {
    return MakeError(ErrorKind::kParseError, "empty pattern at position 0", 0);
  }
  Parser parser(std::move(*tokens), dialect, true, true);
  return parser.ParsePatternTop();
}

std::vector<std::string> SplitStatements(std::string_view script) {
  std::vector<std::string> out;
  std::string cur;
  size_t i = 0;
  auto flush = [&]() {
    std::string trimmed(absl::StripAsciiWhitespace(cur));
    if (!trimmed.empty()) out.push_back(trimmed);
    cur.clear();
  };
  while (i < script.size()) {
    char c = script[i];
    if (c == '\'' || c == '"' || c == '`') {
      size_t j = i + 1;
      while (j < script.size()) {
        if (script[j] == '\\' && c == '\'' && j + 1 < script.size()) {
          j += 2;
          continue;
        }
        if (script[j] == c) {
          if (j + 1 < script.size() && script[j + 1] == c) {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      size_t end = std::min(j + 1, script.size());
      cur.append(script.substr(i, end - i));
      i = end;
      continue;
    }
    if (c == '-' && i + 1 < script.size() && script[i + 1] == '-') {
      while (i < script.size() && script[i] != '\n') cur += script[i++];
      continue;
    }
    if (c == ';') {
      flush();
      ++i;
      continue;
    }
    cur += c;
    ++i;
  }
  flush();
  return out;
}

}  // namespace qb::sql
