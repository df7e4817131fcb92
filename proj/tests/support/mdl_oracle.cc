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

#include "mdl_oracle.h"

#include <cctype>
#include <numeric>

namespace qb::testing {
namespace {

bool NameStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool NameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Length of a `<name>` token at s[i], or 0.
size_t ElementVarAt(const std::string& s, size_t i) {
  if (s[i] != '<' || i + 1 >= s.size() || !NameStart(s[i + 1])) return 0;
  size_t j = i + 1;
  while (j < s.size() && NameChar(s[j])) ++j;
  return j < s.size() && s[j] == '>' ? j + 1 - i : 0;
}

size_t SetVarAt(const std::string& s, size_t i) {
  if (s.compare(i, 2, "<<") != 0) return 0;
  size_t inner = ElementVarAt(s, i + 1);
  if (inner == 0 || i + 1 + inner >= s.size() || s[i + 1 + inner] != '>') {
    return 0;
  }
  return inner + 2;
}

void CountSide(const std::string& s, OracleCounts* c) {
  size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else if (size_t n = SetVarAt(s, i)) {
      ++c->set_vars;
      i += n;
    } else if (size_t n = ElementVarAt(s, i)) {
      ++c->element_vars;
      i += n;
    } else if (ch == '\'') {
      std::string body;
      size_t j = i + 1;
      while (j < s.size()) {
        if (s[j] == '\'' && j + 1 < s.size() && s[j + 1] == '\'') {
          body += '\'';
          j += 2;
        } else if (s[j] == '\'') {
          break;
        } else {
          body += s[j++];
        }
      }
      i = j + 1;
      bool fixed_text = false;
      size_t k = 0;
      while (k < body.size()) {
        if (size_t n = ElementVarAt(body, k)) {
          ++c->element_vars;
          k += n;
        } else {
          fixed_text = true;
          ++k;
        }
      }
      if (fixed_text || body.empty()) ++c->fixed;
    } else if (ch == '"' || ch == '`') {
      size_t j = s.find(ch, i + 1);
      i = j == std::string::npos ? s.size() : j + 1;
      ++c->fixed;
    } else if (NameChar(ch)) {
      // Words and numbers, including decimals such as 1.5.
      size_t j = i;
      while (j < s.size() && (NameChar(s[j]) ||
                              (s[j] == '.' && std::isdigit(static_cast<unsigned char>(ch)) &&
                               j + 1 < s.size() &&
                               std::isdigit(static_cast<unsigned char>(s[j + 1]))))) {
        ++j;
      }
      i = j;
      ++c->fixed;
    } else if (ch == '(' || ch == ')' || ch == ',' || ch == '.' || ch == ';') {
      ++i;
    } else {
      static const char* kTwoChar[] = {"<=", ">=", "<>", "!=", "||", "::"};
      size_t n = 1;
      for (const char* op : kTwoChar) {
        if (s.compare(i, 2, op) == 0) n = 2;
      }
      i += n;
      ++c->fixed;
    }
  }
}

}  // namespace

OracleCounts OracleCount(const std::string& rule_text) {
  OracleCounts c;
  size_t arrow = rule_text.find("-->");
  CountSide(rule_text.substr(0, arrow), &c);
  if (arrow != std::string::npos) CountSide(rule_text.substr(arrow + 3), &c);
  return c;
}

Fraction OracleDescriptionLength(const std::string& rule_text, int64_t w,
                                 int64_t we, int64_t ws) {
  OracleCounts c = OracleCount(rule_text);
  Fraction f{w * c.fixed + we * c.element_vars + ws * c.set_vars, c.fixed};
  int64_t g = std::gcd(f.num, f.den);
  if (g > 1) {
    f.num /= g;
    f.den /= g;
  }
  return f;
}

}  // namespace qb::testing
