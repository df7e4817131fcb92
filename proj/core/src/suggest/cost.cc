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

#include "qb/suggest/cost.h"

#include "json.hpp"
#include "qb/rewrite/engine.h"
#include "qb/sql/parser.h"
#include "qb/sql/serializer.h"
#include "qb/status.h"

namespace qb::suggest {
namespace {

constexpr double kTableScan = 1000;
constexpr double kIndexedPredicate = 10;
constexpr double kWrappedPredicate = 500;

bool WrapsColumn(const sql::NodePtr& n) {
  if (n->kind() != sql::NodeKind::kFuncCall &&
      n->kind() != sql::NodeKind::kCast) {
    return false;
  }
  bool found = false;
  sql::VisitPreorder(n, [&](const sql::NodePtr& x, const sql::Path&) {
    if (x->kind() == sql::NodeKind::kColumnRef) found = true;
    return !found && x->kind() != sql::NodeKind::kSubquery;
  });
  return found;
}

double PredicateCost(const sql::NodePtr& p) {
  if (p->kind() == sql::NodeKind::kConjunction) {
    double total = 0;
    for (const sql::NodePtr& c : p->children()) total += PredicateCost(c);
    return total;
  }
  for (const sql::NodePtr& c : p->children()) {
    if (WrapsColumn(c)) return kWrappedPredicate;
  }
  return kIndexedPredicate;
}

}  // namespace

absl::Status CostConfig::Validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    return MakeError(ErrorKind::kInvalidArgument, "beta must be in [0, 1]");
  }
  return absl::OkStatus();
}

double StaticQueryCost(const sql::NodePtr& query) {
  double cost = 0;
  sql::VisitPreorder(query, [&](const sql::NodePtr& n, const sql::Path&) {
    switch (n->kind()) {
      case sql::NodeKind::kTableRef:
        cost += kTableScan;
        break;
      case sql::NodeKind::kWhere:
      case sql::NodeKind::kHaving:
        for (const sql::NodePtr& c : n->children()) cost += PredicateCost(c);
        break;
      default:
        break;
    }
    return true;
  });
  return cost;
}

CostProvider StaticCostProvider(sql::Dialect dialect) {
  return [dialect](const std::string& text) -> absl::StatusOr<double> {
    absl::StatusOr<sql::NodePtr> q = sql::ParseQuery(text, dialect);
    if (!q.ok()) return q.status();
    return StaticQueryCost(*q);
  };
}

double WorkloadCost(const std::vector<varsql::Rule>& rules,
                    const CostConfig& config) {
  if (!config.provider) return 0;
  rewrite::RewriteLimits limits;
  limits.apply.dialect = config.dialect;
  double total = 0;
  for (const sql::NodePtr& q : config.workload) {
    std::string original = sql::Serialize(q, config.dialect);
    absl::StatusOr<double> base = config.provider(original);
    double fallback = base.ok() ? std::max(*base, 0.0) : 0.0;
    rewrite::RewriteResult out = rewrite::Rewrite(q, rules, nullptr, limits);
    absl::StatusOr<double> cost =
        config.provider(sql::Serialize(out.query, config.dialect));
    total += cost.ok() && *cost >= 0 ? *cost : fallback;
  }
  return total;
}

absl::StatusOr<std::vector<sql::NodePtr>> ParseWorkload(
    const std::string& text, sql::Dialect dialect) {
  std::vector<std::string> statements;
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (!doc.is_discarded() && doc.is_array()) {
    for (const auto& item : doc) {
      if (!item.is_string()) {
        return MakeError(ErrorKind::kInvalidArgument,
                         "workload entries must be SQL strings");
      }
      statements.push_back(item.get<std::string>());
    }
  } else {
    statements = sql::SplitStatements(text);
  }
  std::vector<sql::NodePtr> out;
  for (const std::string& s : statements) {
    absl::StatusOr<sql::NodePtr> q = sql::ParseQuery(s, dialect);
    if (!q.ok()) return q.status();
    out.push_back(*q);
  }
  return out;
}

}  // namespace qb::suggest
