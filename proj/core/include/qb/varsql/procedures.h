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

// Built-in constraint and action procedures referenced from rules.

#ifndef QB_VARSQL_PROCEDURES_H_
#define QB_VARSQL_PROCEDURES_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "qb/rewrite/binding.h"
#include "qb/sql/ast.h"
#include "qb/sql/schema.h"

namespace qb::varsql {

struct ProcArg {
  enum class Kind { kVariable, kString, kNumber };
  Kind kind = Kind::kVariable;
  std::string text;
};

// A constraint or action invocation, e.g. UNIQUE(t1, a1).
struct ProcedureCall {
  std::string name;
  std::vector<ProcArg> args;
};
using ConstraintExpr = ProcedureCall;
using ActionExpr = ProcedureCall;

bool CallsEqual(const ProcedureCall& a, const ProcedureCall& b);
std::string FormatCall(const ProcedureCall& call);

struct ProcedureInfo {
  const char* name;
  int arity;
  bool needs_schema;
  const char* summary;
};

// Registries are fixed at compile time.
const std::vector<ProcedureInfo>& ConstraintRegistry();
const std::vector<ProcedureInfo>& ActionRegistry();
const ProcedureInfo* FindConstraint(std::string_view name);
const ProcedureInfo* FindAction(std::string_view name);

// Evaluates a constraint. Schema-dependent procedures without a catalog
// return MissingSchema; callers treat any error as a failed constraint.
absl::StatusOr<bool> EvalConstraint(const ConstraintExpr& expr,
                                    const rewrite::Binding& binding,
                                    const sql::SchemaCatalog* schema);

// Applies an action to the instantiated replacement `tree`. The binding is
// updated so later actions see the rewritten scope.
absl::StatusOr<sql::NodePtr> ApplyAction(const ActionExpr& expr,
                                         const sql::NodePtr& tree,
                                         rewrite::Binding* binding);

// Table name behind a bound table variable (not its alias).
std::string TableNameOf(const sql::NodePtr& node);
// Column name behind a bound column variable.
std::string ColumnNameOf(const sql::NodePtr& node);

}  // namespace qb::varsql

#endif  // QB_VARSQL_PROCEDURES_H_
