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

#include "qb/sql/lexer.h"

#include <cctype>
#include <string>
#include <vector>

#include "qb/status.h"

namespace qb::sql {
namespace {

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool IsIdentChar(char c) {
  return IsIdentStart(c) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '$';
}

bool IsVarChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Length of a run of [A-Za-z0-9_] starting at i.
size_t VarRun(std::string_view s, size_t i) {
  size_t j = i;
  while (j < s.size() && IsVarChar(s[j])) ++j;
  return j - i;
}

}  // namespace

absl::StatusOr<std::vector<Token>> Tokenize(std::string_view sql,
                                            Dialect dialect,
                                            bool pattern_mode) {
  std::vector<Token> out;
  size_t i = 0;
  const size_t n = sql.size();
  auto error = [&](const std::string& msg, size_t at) {
    return MakeError(ErrorKind::kParseError,
                     msg + " at position " + std::to_string(at),
                     static_cast<int>(at));
  };
  while (i < n) {
    char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
      size_t close = sql.find("*/", i + 2);
      if (close == std::string_view::npos) {
        return error("unterminated comment", i);
      }
      i = close + 2;
      continue;
    }
    Token tok;
    tok.pos = static_cast<int>(i);
    if (pattern_mode && c == '<') {
      bool set = i + 1 < n && sql[i + 1] == '<';
      size_t start = i + (set ? 2 : 1);
      size_t len = VarRun(sql, start);
      size_t close = start + len;
      bool closed = set ? (close + 1 < n && sql[close] == '>' &&
                           sql[close + 1] == '>')
                        : (close < n && sql[close] == '>');
      if (len > 0 && closed) {
        std::string name(sql.substr(start, len));
        if (std::isdigit(static_cast<unsigned char>(name[0]))) {
          return MakeError(ErrorKind::kMalformedVariable,
                           "malformed variable '" +
                               std::string(sql.substr(i, close + (set ? 2 : 1) - i)) +
                               "': names must not start with a digit",
                           static_cast<int>(i));
        }
        tok.type = set ? TokenType::kVarSet : TokenType::kVarElem;
        tok.text = name;
        i = close + (set ? 2 : 1);
        tok.end = static_cast<int>(i);
        out.push_back(std::move(tok));
        continue;
      }
    }
    if (IsIdentStart(c)) {
      size_t j = i;
      while (j < n && IsIdentChar(sql[j])) ++j;
      tok.type = TokenType::kIdent;
      tok.text = std::string(sql.substr(i, j - i));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < n &&
                std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
      if (j < n && sql[j] == '.') {
        ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
      }
      if (j < n && (sql[j] == 'e' || sql[j] == 'E')) {
        size_t k = j + 1;
        if (k < n && (sql[k] == '+' || sql[k] == '-')) ++k;
        if (k < n && std::isdigit(static_cast<unsigned char>(sql[k]))) {
          j = k;
          while (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) {
            ++j;
          }
        }
      }
      tok.type = TokenType::kNumber;
      tok.text = std::string(sql.substr(i, j - i));
      i = j;
    } else if (c == '\'' ||
               (c == '"' && dialect == Dialect::kMySql)) {
      char q = c;
      std::string value;
      size_t j = i + 1;
      bool closed = false;
      while (j < n) {
        char d = sql[j];
        if (d == '\\' && dialect == Dialect::kMySql && j + 1 < n) {
          char e = sql[j + 1];
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case '0': value += '\0'; break;
            default: value += e; break;
          }
          j += 2;
          continue;
        }
        if (d == q) {
          if (j + 1 < n && sql[j + 1] == q) {
            value += q;
            j += 2;
            continue;
          }
          closed = true;
          ++j;
          break;
        }
        value += d;
        ++j;
      }
      if (!closed) return error("unterminated string literal", i);
      tok.type = TokenType::kString;
      tok.text = std::move(value);
      i = j;
    } else if (c == '"' || c == '`') {
      char q = c;
      std::string value;
      size_t j = i + 1;
      bool closed = false;
      while (j < n) {
        if (sql[j] == q) {
          if (j + 1 < n && sql[j + 1] == q) {
            value += q;
            j += 2;
            continue;
          }
          closed = true;
          ++j;
          break;
        }
        value += sql[j++];
      }
      if (!closed) return error("unterminated quoted identifier", i);
      if (value.empty()) return error("empty quoted identifier", i);
      tok.type = TokenType::kQuotedIdent;
      tok.text = std::move(value);
      i = j;
    } else if (c == '?') {
      tok.type = TokenType::kParam;
      tok.text = "?";
      ++i;
    } else if (c == '$' && i + 1 < n &&
               std::isdigit(static_cast<unsigned char>(sql[i + 1]))) {
      size_t j = i + 1;
      while (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
      tok.type = TokenType::kParam;
      tok.text = std::string(sql.substr(i, j - i));
      i = j;
    } else {
      static const char* const kTwo[] = {"<=", ">=", "<>", "!=", "||", "::"};
      tok.type = TokenType::kOp;
      bool two = false;
      if (i + 1 < n) {
        for (const char* op : kTwo) {
          if (sql[i] == op[0] && sql[i + 1] == op[1]) {
            tok.text = op;
            two = true;
            break;
          }
        }
      }
      if (two) {
        i += 2;
      } else if (std::string_view("=<>+-*/%(),.;").find(c) !=
                 std::string_view::npos) {
        tok.text = std::string(1, c);
        ++i;
      } else {
        return error(std::string("unexpected character '") + c + "'", i);
      }
    }
    tok.end = static_cast<int>(i);
    out.push_back(std::move(tok));
  }
  Token end;
  end.type = TokenType::kEnd;
  end.pos = static_cast<int>(n);
  end.end = static_cast<int>(n);
  out.push_back(end);
  return out;
}

std::string QuoteString(std::string_view value, Dialect dialect) {
  std::string out = "'";
  for (char c : value) {
    if (c == '\'') {
      out += "''";
    } else if (c == '\\' && dialect == Dialect::kMySql) {
      out += "\\\\";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

std::string QuoteIdentifier(std::string_view name, Dialect dialect) {
  char q = dialect == Dialect::kMySql ? '`' : '"';
  std::string out(1, q);
  for (char c : name) {
    if (c == q) out += q;
    out += c;
  }
  out += q;
  return out;
}

std::string RenderToken(const Token& token, Dialect dialect) {
  switch (token.type) {
    case TokenType::kString:
      return QuoteString(token.text, dialect);
    case TokenType::kQuotedIdent:
      return QuoteIdentifier(token.text, dialect);
    case TokenType::kVarElem:
      return "<" + token.text + ">";
    case TokenType::kVarSet:
      return "<<" + token.text + ">>";
    default:
      return token.text;
  }
}

}  // namespace qb::sql
