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

#include "qb/varsql/rule.h"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "qb/sql/lexer.h"
#include "qb/sql/parser.h"
#include "qb/sql/serializer.h"
#include "qb/status.h"

namespace qb::varsql {
namespace {

using sql::NodeKind;
using sql::NodePtr;

// Positions of `target` outside quotes (and, for '/', outside parentheses).
std::vector<size_t> TopLevelPositions(std::string_view text,
                                      std::string_view target,
                                      bool require_depth_zero) {
  std::vector<size_t> out;
  int depth = 0;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\'' || c == '"' || c == '`') {
      size_t j = i + 1;
      while (j < text.size()) {
        if (text[j] == c) {
          if (j + 1 < text.size() && text[j + 1] == c) {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      i = j + 1;
      continue;
    }
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (text.substr(i, target.size()) == target &&
        (!require_depth_zero || depth == 0)) {
      out.push_back(i);
      i += target.size();
      continue;
    }
    ++i;
  }
  return out;
}

struct ShapedCall {
  ProcedureCall call;
  // Args written as bare identifiers, not <x>.
  std::vector<std::string> bare_vars;
};

// Parses NAME(args) {(';'|AND) NAME(args)} without checking registries.
bool ParseCallsShape(std::string_view text, std::vector<ShapedCall>* out,
                     absl::Status* error) {
  auto tokens = sql::Tokenize(text, sql::Dialect::kGeneric, true);
  if (!tokens.ok()) {
    *error = tokens.status();
    return false;
  }
  const std::vector<sql::Token>& t = *tokens;
  size_t i = 0;
  auto fail = [&](const std::string& msg) {
    *error = MakeError(ErrorKind::kParseError,
                       msg + " at position " + std::to_string(t[i].pos),
                       t[i].pos);
    return false;
  };
  if (t[0].type == sql::TokenType::kEnd) return fail("empty procedure list");
  while (true) {
    if (t[i].type != sql::TokenType::kIdent) return fail("expected procedure");
    ShapedCall sc;
    sc.call.name = t[i].text;
    ++i;
    if (!(t[i].type == sql::TokenType::kOp && t[i].text == "(")) {
      return fail("expected '('");
    }
    ++i;
    if (!(t[i].type == sql::TokenType::kOp && t[i].text == ")")) {
      while (true) {
        ProcArg arg;
        switch (t[i].type) {
          case sql::TokenType::kIdent:
          case sql::TokenType::kQuotedIdent:
            arg.kind = ProcArg::Kind::kVariable;
            arg.text = t[i].text;
            sc.bare_vars.push_back(t[i].text);
            break;
          case sql::TokenType::kVarElem:
          case sql::TokenType::kVarSet:
            arg.kind = ProcArg::Kind::kVariable;
            arg.text = t[i].text;
            break;
          case sql::TokenType::kString:
            arg.kind = ProcArg::Kind::kString;
            arg.text = t[i].text;
            break;
          case sql::TokenType::kNumber:
            arg.kind = ProcArg::Kind::kNumber;
            arg.text = t[i].text;
            break;
          default:
            return fail("expected argument");
        }
        sc.call.args.push_back(arg);
        ++i;
        if (t[i].type == sql::TokenType::kOp && t[i].text == ",") {
          ++i;
          continue;
        }
        break;
      }
      if (!(t[i].type == sql::TokenType::kOp && t[i].text == ")")) {
        return fail("expected ')'");
      }
    }
    ++i;
    out->push_back(std::move(sc));
    if (t[i].type == sql::TokenType::kEnd) return true;
    if (t[i].type == sql::TokenType::kOp && t[i].text == ";") {
      ++i;
      if (t[i].type == sql::TokenType::kEnd) return true;
      continue;
    }
    if (t[i].type == sql::TokenType::kIdent &&
        absl::EqualsIgnoreCase(t[i].text, "AND")) {
      ++i;
      continue;
    }
    return fail("expected ';' or AND");
  }
}

// Variable names written as <x>, <<x>> or inside string templates.
std::set<std::string> VariableNamesInText(std::string_view text) {
  std::set<std::string> out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '<') continue;
    size_t j = i + 1;
    if (j < text.size() && text[j] == '<') ++j;
    size_t k = j;
    while (k < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[k])) ||
            text[k] == '_')) {
      ++k;
    }
    if (k > j && k < text.size() && text[k] == '>') {
      out.insert(std::string(text.substr(j, k - j)));
    }
  }
  return out;
}

struct Section {
  std::string body;
  std::string procedures;  // empty when absent
};

// Splits "body / procs" at the last '/' whose suffix reads as a procedure
// list. A '/' followed by anything else is division.
Section SplitSection(std::string_view text, bool actions) {
  Section s;
  std::vector<size_t> slashes = TopLevelPositions(text, "/", true);
  for (auto it = slashes.rbegin(); it != slashes.rend(); ++it) {
    size_t p = *it;
    if (p + 1 < text.size() && text[p + 1] == '*') continue;
    if (p > 0 && text[p - 1] == '*') continue;
    std::string_view suffix = text.substr(p + 1);
    std::vector<ShapedCall> calls;
    absl::Status ignored;
    if (!ParseCallsShape(suffix, &calls, &ignored)) continue;
    bool known = actions ? FindAction(calls[0].call.name) != nullptr
                         : FindConstraint(calls[0].call.name) != nullptr;
    bool var_args = false;
    if (!known) {
      std::set<std::string> vars = VariableNamesInText(text.substr(0, p));
      var_args = true;
      size_t count = 0;
      for (const ShapedCall& c : calls) {
        for (const ProcArg& a : c.call.args) {
          if (a.kind != ProcArg::Kind::kVariable) continue;
          ++count;
        }
        for (const std::string& v : c.bare_vars) {
          if (!vars.count(v)) var_args = false;
        }
        if (c.bare_vars.size() != c.call.args.size()) var_args = false;
      }
      var_args = var_args && count > 0;
    }
    if (known || var_args) {
      s.body = std::string(absl::StripAsciiWhitespace(
          absl::string_view(text.data(), p)));
      s.procedures = std::string(absl::StripAsciiWhitespace(
          absl::string_view(suffix.data(), suffix.size())));
      return s;
    }
  }
  s.body = std::string(
      absl::StripAsciiWhitespace(absl::string_view(text.data(), text.size())));
  return s;
}

void CollectNames(const NodePtr& root, std::map<std::string, bool>* names,
                  absl::Status* status) {
  std::vector<sql::VarOccurrence> occ;
  sql::CollectVariables(root, &occ);
  for (const auto& o : occ) {
    auto it = names->find(o.name);
    if (it != names->end() && it->second != o.is_set && status->ok()) {
      *status = MakeError(ErrorKind::kMalformedVariable,
                          "variable '" + o.name +
                              "' is used both as element and set variable");
    }
    (*names)[o.name] = o.is_set;
  }
}

absl::Status CheckCalls(const std::vector<ProcedureCall>& calls, bool actions,
                        const std::map<std::string, bool>& names) {
  for (const ProcedureCall& c : calls) {
    const ProcedureInfo* info =
        actions ? FindAction(c.name) : FindConstraint(c.name);
    if (!info) {
      return MakeError(ErrorKind::kUnknownProcedure,
                       std::string(actions ? "unknown action '"
                                           : "unknown constraint '") +
                           c.name + "'");
    }
    if (static_cast<int>(c.args.size()) != info->arity) {
      return MakeError(ErrorKind::kParseError,
                       std::string(info->name) + " takes " +
                           std::to_string(info->arity) + " argument(s), got " +
                           std::to_string(c.args.size()));
    }
    for (const ProcArg& a : c.args) {
      if (a.kind == ProcArg::Kind::kVariable && !names.count(a.text)) {
        return MakeError(ErrorKind::kUnboundVariable,
                         "unbound variable '" + a.text + "' in " + c.name);
      }
    }
  }
  return absl::OkStatus();
}

void Canonicalize(std::vector<ProcedureCall>* calls, bool actions) {
  for (ProcedureCall& c : *calls) {
    const ProcedureInfo* info =
        actions ? FindAction(c.name) : FindConstraint(c.name);
    if (info) c.name = info->name;
  }
}

}  // namespace

absl::StatusOr<std::vector<ProcedureCall>> ParseProcedureList(
    std::string_view text, bool actions) {
  std::vector<ShapedCall> shaped;
  absl::Status error;
  if (!ParseCallsShape(text, &shaped, &error)) return error;
  std::vector<ProcedureCall> out;
  for (ShapedCall& s : shaped) {
    const ProcedureInfo* info =
        actions ? FindAction(s.call.name) : FindConstraint(s.call.name);
    if (!info) {
      return MakeError(ErrorKind::kUnknownProcedure,
                       std::string(actions ? "unknown action '"
                                           : "unknown constraint '") +
                           s.call.name + "'");
    }
    s.call.name = info->name;
    out.push_back(std::move(s.call));
  }
  return out;
}

absl::Status ValidateRule(const Rule& rule) {
  if (!rule.pattern.root || !rule.replacement.root) {
    return MakeError(ErrorKind::kParseError, "rule needs a pattern and a "
                                             "replacement");
  }
  bool ps = rule.pattern.level == sql::FragmentLevel::kStatement;
  bool rs = rule.replacement.level == sql::FragmentLevel::kStatement;
  if (ps != rs) {
    return MakeError(ErrorKind::kParseError,
                     std::string("pattern is a ") +
                         sql::FragmentLevelName(rule.pattern.level) +
                         " fragment but the replacement is a " +
                         sql::FragmentLevelName(rule.replacement.level) +
                         " fragment");
  }
  std::map<std::string, bool> names;
  absl::Status st;
  CollectNames(rule.pattern.root, &names, &st);
  if (!st.ok()) return st;
  std::vector<sql::VarOccurrence> occ;
  sql::CollectVariables(rule.replacement.root, &occ);
  for (const auto& o : occ) {
    auto it = names.find(o.name);
    if (it == names.end()) {
      return MakeError(ErrorKind::kUnboundVariable,
                       "unbound variable '" + o.name + "' in replacement");
    }
    if (it->second != o.is_set) {
      return MakeError(ErrorKind::kMalformedVariable,
                       "variable '" + o.name +
                           "' changes between element and set form");
    }
  }
  if (auto s = CheckCalls(rule.constraints, false, names); !s.ok()) return s;
  return CheckCalls(rule.actions, true, names);
}

absl::StatusOr<Rule> ParseRule(std::string_view text, sql::Dialect dialect) {
  std::vector<size_t> arrows = TopLevelPositions(text, "-->", false);
  if (arrows.size() != 1) {
    return MakeError(ErrorKind::kParseError,
                     arrows.empty() ? "rule has no '-->' separator"
                                    : "rule has more than one '-->'",
                     arrows.empty() ? 0 : static_cast<int>(arrows[1]));
  }
  std::string_view left = text.substr(0, arrows[0]);
  std::string_view right = text.substr(arrows[0] + 3);
  Section lhs = SplitSection(left, false);
  Section rhs = SplitSection(right, true);
  std::vector<std::string> constraints, actions;
  Rule rule;
  if (!lhs.procedures.empty()) {
    auto c = ParseProcedureList(lhs.procedures, false);
    if (!c.ok()) return c.status();
    rule.constraints = *std::move(c);
  }
  if (!rhs.procedures.empty()) {
    auto a = ParseProcedureList(rhs.procedures, true);
    if (!a.ok()) return a.status();
    rule.actions = *std::move(a);
  }
  auto pattern = sql::ParsePattern(lhs.body, dialect);
  if (!pattern.ok()) return pattern.status();
  auto replacement = sql::ParsePattern(rhs.body, dialect);
  if (!replacement.ok()) return replacement.status();
  rule.pattern = *std::move(pattern);
  rule.replacement = *std::move(replacement);
  if (auto s = ValidateRule(rule); !s.ok()) return s;
  return rule;
}

absl::StatusOr<Rule> MakeRule(std::string_view pattern,
                              const std::vector<std::string>& constraints,
                              std::string_view replacement,
                              const std::vector<std::string>& actions,
                              sql::Dialect dialect) {
  Rule rule;
  auto p = sql::ParsePattern(pattern, dialect);
  if (!p.ok()) return p.status();
  auto r = sql::ParsePattern(replacement, dialect);
  if (!r.ok()) return r.status();
  rule.pattern = *std::move(p);
  rule.replacement = *std::move(r);
  for (const std::string& c : constraints) {
    auto list = ParseProcedureList(c, false);
    if (!list.ok()) return list.status();
    rule.constraints.insert(rule.constraints.end(), list->begin(),
                            list->end());
  }
  for (const std::string& a : actions) {
    auto list = ParseProcedureList(a, true);
    if (!list.ok()) return list.status();
    rule.actions.insert(rule.actions.end(), list->begin(), list->end());
  }
  if (auto s = ValidateRule(rule); !s.ok()) return s;
  return rule;
}

absl::StatusOr<Rule> MakeRule(sql::Pattern pattern, sql::Pattern replacement) {
  Rule rule;
  rule.pattern = std::move(pattern);
  rule.replacement = std::move(replacement);
  if (auto s = ValidateRule(rule); !s.ok()) return s;
  return rule;
}

std::string SerializeRule(const Rule& rule, sql::Dialect dialect) {
  std::string out = sql::Serialize(rule.pattern.root, dialect);
  if (!rule.constraints.empty()) {
    out += " / ";
    for (size_t i = 0; i < rule.constraints.size(); ++i) {
      if (i) out += "; ";
      out += FormatCall(rule.constraints[i]);
    }
  }
  out += " --> " + sql::Serialize(rule.replacement.root, dialect);
  if (!rule.actions.empty()) {
    out += " / ";
    for (size_t i = 0; i < rule.actions.size(); ++i) {
      if (i) out += "; ";
      out += FormatCall(rule.actions[i]);
    }
  }
  return out;
}

bool SameRuleBody(const Rule& a, const Rule& b) {
  if (a.pattern.level != b.pattern.level ||
      a.replacement.level != b.replacement.level) {
    return false;
  }
  if (!sql::Equal(a.pattern.root, b.pattern.root) ||
      !sql::Equal(a.replacement.root, b.replacement.root)) {
    return false;
  }
  if (a.constraints.size() != b.constraints.size() ||
      a.actions.size() != b.actions.size()) {
    return false;
  }
  for (size_t i = 0; i < a.constraints.size(); ++i) {
    if (!CallsEqual(a.constraints[i], b.constraints[i])) return false;
  }
  for (size_t i = 0; i < a.actions.size(); ++i) {
    if (!CallsEqual(a.actions[i], b.actions[i])) return false;
  }
  return true;
}

nlohmann::json RuleToJson(const Rule& rule) {
  nlohmann::json j;
  j["id"] = rule.id;
  j["name"] = rule.name;
  j["pattern"] = sql::Serialize(rule.pattern.root);
  j["constraints"] = nlohmann::json::array();
  for (const auto& c : rule.constraints) j["constraints"].push_back(FormatCall(c));
  j["replacement"] = sql::Serialize(rule.replacement.root);
  j["actions"] = nlohmann::json::array();
  for (const auto& a : rule.actions) j["actions"].push_back(FormatCall(a));
  j["priority"] = rule.priority;
  j["workspace"] = rule.workspace;
  j["enabled"] = rule.enabled;
  return j;
}

absl::StatusOr<Rule> RuleFromJson(const nlohmann::json& j,
                                  sql::Dialect dialect) {
  if (!j.is_object()) {
    return MakeError(ErrorKind::kInvalidArgument, "rule must be an object");
  }
  auto get_list = [&](const char* key,
                      std::vector<std::string>* out) -> absl::Status {
    if (!j.contains(key) || j[key].is_null()) return absl::OkStatus();
    if (j[key].is_string()) {
      if (!j[key].get<std::string>().empty()) {
        out->push_back(j[key].get<std::string>());
      }
      return absl::OkStatus();
    }
    if (!j[key].is_array()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       std::string("'") + key + "' must be a list");
    }
    for (const auto& item : j[key]) {
      if (!item.is_string()) {
        return MakeError(ErrorKind::kInvalidArgument,
                         std::string("'") + key + "' entries must be text");
      }
      out->push_back(item.get<std::string>());
    }
    return absl::OkStatus();
  };
  absl::StatusOr<Rule> rule;
  if (j.contains("rule") && j["rule"].is_string()) {
    rule = ParseRule(j["rule"].get<std::string>(), dialect);
  } else {
    if (!j.contains("pattern") || !j["pattern"].is_string() ||
        !j.contains("replacement") || !j["replacement"].is_string()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       "rule needs 'pattern' and 'replacement' text");
    }
    std::vector<std::string> constraints, actions;
    if (auto s = get_list("constraints", &constraints); !s.ok()) return s;
    if (auto s = get_list("actions", &actions); !s.ok()) return s;
    rule = MakeRule(j["pattern"].get<std::string>(), constraints,
                    j["replacement"].get<std::string>(), actions, dialect);
  }
  if (!rule.ok()) return rule.status();
  try {
    rule->id = j.value("id", static_cast<int64_t>(0));
    rule->name = j.value("name", std::string());
    rule->priority = j.value("priority", 0);
    rule->workspace = j.value("workspace", static_cast<int64_t>(1));
    rule->enabled = j.value("enabled", true);
  } catch (const nlohmann::json::exception& e) {
    return MakeError(ErrorKind::kInvalidArgument,
                     std::string("bad rule field: ") + e.what());
  }
  return rule;
}

absl::StatusOr<std::vector<Rule>> ParseRuleFile(std::string_view json_text,
                                                sql::Dialect dialect) {
  nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) {
    return MakeError(ErrorKind::kInvalidArgument, "rule file is not JSON");
  }
  if (doc.is_object() && doc.contains("rules")) doc = doc["rules"];
  if (!doc.is_array()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "rule file must be a JSON array");
  }
  std::vector<Rule> rules;
  int64_t next_id = 1;
  for (const auto& item : doc) {
    auto r = RuleFromJson(item, dialect);
    if (!r.ok()) return r.status();
    if (r->id == 0) r->id = next_id;
    next_id = std::max(next_id, r->id + 1);
    rules.push_back(*std::move(r));
  }
  return rules;
}

absl::StatusOr<std::vector<Rule>> LoadRuleFile(const std::string& path,
                                               sql::Dialect dialect) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kIo, "cannot read rule file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseRuleFile(buffer.str(), dialect);
}

std::string RulesToJsonText(const std::vector<Rule>& rules) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Rule& r : rules) arr.push_back(RuleToJson(r));
  return arr.dump(2) + "\n";
}

}  // namespace qb::varsql
