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

#ifndef QB_VARSQL_RULE_H_
#define QB_VARSQL_RULE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "qb/sql/ast.h"
#include "qb/varsql/procedures.h"

namespace qb::varsql {

// pattern / constraints --> replacement / actions
struct Rule {
  int64_t id = 0;
  std::string name;
  sql::Pattern pattern;
  std::vector<ConstraintExpr> constraints;
  sql::Pattern replacement;
  std::vector<ActionExpr> actions;
  int priority = 0;
  int64_t workspace = 1;
  bool enabled = true;
};

// Parses the single-line form. Constraint and action lists may be separated
// by ';' or AND.
absl::StatusOr<Rule> ParseRule(std::string_view text,
                               sql::Dialect dialect = sql::Dialect::kGeneric);

// Builds a rule from separately stored parts, as found in rule files.
absl::StatusOr<Rule> MakeRule(std::string_view pattern,
                              const std::vector<std::string>& constraints,
                              std::string_view replacement,
                              const std::vector<std::string>& actions,
                              sql::Dialect dialect = sql::Dialect::kGeneric);

// Builds a rule from trees; used by rule suggestion.
absl::StatusOr<Rule> MakeRule(sql::Pattern pattern, sql::Pattern replacement);

// Checks variable scoping, fragment levels and procedure signatures.
absl::Status ValidateRule(const Rule& rule);

std::string SerializeRule(const Rule& rule,
                          sql::Dialect dialect = sql::Dialect::kGeneric);

// Parses "NAME(arg, ...)" lists. `actions` selects the action registry.
absl::StatusOr<std::vector<ProcedureCall>> ParseProcedureList(
    std::string_view text, bool actions);

// Pattern, replacement, constraints and actions agree.
bool SameRuleBody(const Rule& a, const Rule& b);

nlohmann::json RuleToJson(const Rule& rule);
absl::StatusOr<Rule> RuleFromJson(const nlohmann::json& json,
                                  sql::Dialect dialect = sql::Dialect::kGeneric);

// Rule files are JSON arrays of rule objects.
absl::StatusOr<std::vector<Rule>> ParseRuleFile(std::string_view json_text,
                                                sql::Dialect dialect =
                                                    sql::Dialect::kGeneric);
absl::StatusOr<std::vector<Rule>> LoadRuleFile(const std::string& path,
                                               sql::Dialect dialect =
                                                   sql::Dialect::kGeneric);
std::string RulesToJsonText(const std::vector<Rule>& rules);

}  // namespace qb::varsql

#endif  // QB_VARSQL_RULE_H_
