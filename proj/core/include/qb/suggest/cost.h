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

#ifndef QB_SUGGEST_COST_H_
#define QB_SUGGEST_COST_H_

#include <functional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "qb/sql/ast.h"
#include "qb/varsql/rule.h"

namespace qb::suggest {

// Estimated cost of running one SQL query; must be nonnegative.
using CostProvider =
    std::function<absl::StatusOr<double>(const std::string& sql)>;

struct CostConfig {
  double beta = 1.0;
  std::vector<sql::NodePtr> workload;
  CostProvider provider;
  sql::Dialect dialect = sql::Dialect::kGeneric;

  absl::Status Validate() const;
  // Without a provider only description length counts.
  double EffectiveBeta() const { return provider ? beta : 1.0; }
};

// A rough plan-free estimate: a fixed cost per scanned table, a small cost
// per predicate that can use an index and a large one per predicate that
// wraps a column in a function.
double StaticQueryCost(const sql::NodePtr& query);

// Parses the SQL and returns StaticQueryCost.
CostProvider StaticCostProvider(sql::Dialect dialect = sql::Dialect::kGeneric);

// Total cost of the workload after rewriting each query with `rules`. A query
// whose rewrite cannot be costed counts at its original cost.
double WorkloadCost(const std::vector<varsql::Rule>& rules,
                    const CostConfig& config);

// Reads a workload: a JSON array of SQL strings, or plain SQL separated by
// semicolons.
absl::StatusOr<std::vector<sql::NodePtr>> ParseWorkload(
    const std::string& text, sql::Dialect dialect = sql::Dialect::kGeneric);

}  // namespace qb::suggest

#endif  // QB_SUGGEST_COST_H_
