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

#ifndef QB_REWRITE_ENGINE_H_
#define QB_REWRITE_ENGINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qb/rewrite/matcher.h"
#include "qb/sql/ast.h"
#include "qb/sql/schema.h"
#include "qb/status.h"
#include "qb/varsql/rule.h"

namespace qb::rewrite {

// A rule application that was attempted and discarded.
struct Diagnostic {
  int64_t rule_id = 0;
  ErrorKind kind = ErrorKind::kNone;
  std::string message;
};

struct ApplyOptions {
  sql::Dialect dialect = sql::Dialect::kGeneric;
  MatchLimits match;
  // Concrete results must survive serialize + parse unchanged.
  bool validate = true;
};

// Applies `rule` at the first site where the pattern matches and all
// constraints hold. Returns nothing when the rule does not fire.
std::optional<sql::NodePtr> ApplyRule(const varsql::Rule& rule,
                                      const sql::NodePtr& query,
                                      const sql::SchemaCatalog* schema,
                                      std::vector<Diagnostic>* diagnostics =
                                          nullptr,
                                      const ApplyOptions& options = {});

enum class Termination { kFixpoint, kCycle, kStepLimit };
const char* TerminationName(Termination t);

struct RewriteStep {
  int64_t rule_id = 0;
  sql::NodePtr before;
  sql::NodePtr after;
};

struct RewriteTrace {
  std::vector<RewriteStep> steps;
  Termination terminated_by = Termination::kFixpoint;
  std::vector<Diagnostic> diagnostics;
};

struct RewriteLimits {
  int max_steps = 64;
  ApplyOptions apply;
};

struct RewriteResult {
  sql::NodePtr query;
  RewriteTrace trace;
};

// Rules are tried by priority (high first), then id. Disabled rules are
// skipped; workspace filtering is left to the caller.
RewriteResult Rewrite(const sql::NodePtr& query,
                      const std::vector<varsql::Rule>& rules,
                      const sql::SchemaCatalog* schema,
                      const RewriteLimits& limits = {});

// Orders rules the way Rewrite tries them.
std::vector<const varsql::Rule*> OrderRules(
    const std::vector<varsql::Rule>& rules);

nlohmann::json TraceToJson(const RewriteTrace& trace,
                           sql::Dialect dialect = sql::Dialect::kGeneric);

}  // namespace qb::rewrite

#endif  // QB_REWRITE_ENGINE_H_
