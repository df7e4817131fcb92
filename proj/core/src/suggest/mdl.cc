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

#include "qb/suggest/mdl.h"

#include <cctype>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "qb/sql/lexer.h"
#include "qb/sql/serializer.h"
#include "qb/status.h"

namespace qb::suggest {
namespace {

bool IsPunctuation(const std::string& op) {
  return op == "(" || op == ")" || op == "," || op == "." || op == ";";
}

// Counts `<name>` splices in a string literal and reports whether any fixed
// text remains. An empty literal counts as fixed.
void CountTemplate(const std::string& text, ElementCounts* counts) {
  bool fixed = false;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '<') {
      size_t j = i + 1;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_')) {
        ++j;
      }
      if (j > i + 1 && j < text.size() && text[j] == '>' &&
          !std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        ++counts->c_e;
        i = j + 1;
        continue;
      }
    }
    fixed = true;
    ++i;
  }
  if (fixed || text.empty()) ++counts->c_o;
}

void CountText(const std::string& text, ElementCounts* counts) {
  auto tokens = sql::Tokenize(text, sql::Dialect::kGeneric, true);
  if (!tokens.ok()) return;
  for (const sql::Token& t : *tokens) {
    switch (t.type) {
      case sql::TokenType::kEnd:
        break;
      case sql::TokenType::kVarElem:
        ++counts->c_e;
        break;
      case sql::TokenType::kVarSet:
        ++counts->c_s;
        break;
      case sql::TokenType::kString:
        CountTemplate(t.text, counts);
        break;
      case sql::TokenType::kOp:
        if (!IsPunctuation(t.text)) ++counts->c_o;
        break;
      default:
        ++counts->c_o;
        break;
    }
  }
}

}  // namespace

absl::Status MdlConfig::Validate() const {
  if (w <= 0 || w_e <= 0 || w_s <= 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "description length weights must be positive");
  }
  if (w_s < w_e) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "set-variable weight must be at least the element weight");
  }
  return absl::OkStatus();
}

Rational ParseRational(std::string_view text, bool* ok) {
  *ok = false;
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.pop_back();
  }
  size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) {
    ++start;
  }
  s = s.substr(start);
  if (s.empty()) return 0;
  try {
    size_t slash = s.find('/');
    if (slash != std::string::npos) {
      Rational num{boost::multiprecision::cpp_int(s.substr(0, slash))};
      Rational den{boost::multiprecision::cpp_int(s.substr(slash + 1))};
      if (den == 0) return 0;
      *ok = true;
      return num / den;
    }
    size_t dot = s.find('.');
    if (dot == std::string::npos) {
      Rational r{boost::multiprecision::cpp_int(s)};
      *ok = true;
      return r;
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits == "-") return 0;
    boost::multiprecision::cpp_int scale = 1;
    for (size_t i = dot + 1; i < s.size(); ++i) scale *= 10;
    Rational r{boost::multiprecision::cpp_int(digits)};
    *ok = true;
    return r / scale;
  } catch (const std::exception&) {
    return 0;
  }
}

absl::StatusOr<MdlConfig> ParseMdlConfig(std::string_view text) {
  std::vector<std::string> parts =
      absl::StrSplit(absl::string_view(text.data(), text.size()), ',');
  if (parts.size() != 3) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "expected three comma-separated weights W,We,Ws");
  }
  MdlConfig config;
  Rational* slots[] = {&config.w, &config.w_e, &config.w_s};
  for (size_t i = 0; i < 3; ++i) {
    bool ok = false;
    *slots[i] = ParseRational(parts[i], &ok);
    if (!ok) {
      return MakeError(ErrorKind::kInvalidArgument,
                       "invalid weight '" + parts[i] + "'");
    }
  }
  absl::Status valid = config.Validate();
  if (!valid.ok()) return valid;
  return config;
}

ElementCounts CountElements(const varsql::Rule& rule) {
  ElementCounts counts;
  CountText(sql::Serialize(rule.pattern.root), &counts);
  CountText(sql::Serialize(rule.replacement.root), &counts);
  return counts;
}

absl::StatusOr<Rational> DescriptionLength(const varsql::Rule& rule,
                                           const MdlConfig& config) {
  ElementCounts c = CountElements(rule);
  if (c.c_o == 0) {
    return MakeError(ErrorKind::kDegenerateRule,
                     "rule has no fixed elements: " +
                         varsql::SerializeRule(rule));
  }
  return config.w + (config.w_e * c.c_e + config.w_s * c.c_s) / c.c_o;
}

double ToDouble(const Rational& value) {
  return static_cast<double>(value);
}

std::string ToString(const Rational& value) {
  if (boost::multiprecision::denominator(value) == 1) {
    return boost::multiprecision::numerator(value).str();
  }
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

}  // namespace qb::suggest
