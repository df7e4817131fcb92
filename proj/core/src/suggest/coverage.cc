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

#include "qb/suggest/coverage.h"

#include "qb/rewrite/engine.h"
#include "qb/sql/parser.h"
#include "qb/status.h"
#include "qb/suggest/transform.h"

namespace qb::suggest {
namespace {

constexpr int kPairSteps = 16;

// Rewrites `tree` with `rule` alone; nothing when the rule does not fire.
std::optional<sql::NodePtr> RewriteAlone(const varsql::Rule& rule,
                                         const sql::NodePtr& tree) {
  rewrite::RewriteLimits limits;
  limits.max_steps = kPairSteps;
  varsql::Rule only = rule;
  only.enabled = true;
  rewrite::RewriteResult result = rewrite::Rewrite(tree, {only}, nullptr,
                                                   limits);
  if (result.trace.steps.empty()) return std::nullopt;
  if (result.trace.terminated_by != rewrite::Termination::kFixpoint) {
    return nullptr;
  }
  return result.query;
}

}  // namespace

absl::StatusOr<RewritePair> MakePair(std::string_view original,
                                     std::string_view rewritten,
                                     sql::Dialect dialect) {
  absl::StatusOr<sql::NodePtr> a = sql::ParseQuery(original, dialect);
  if (!a.ok()) return a.status();
  absl::StatusOr<sql::NodePtr> b = sql::ParseQuery(rewritten, dialect);
  if (!b.ok()) return b.status();
  if (sql::Equal(*a, *b)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "original and rewritten query are the same");
  }
  return RewritePair{*a, *b, std::string(original), std::string(rewritten)};
}

varsql::Rule PairAsRule(const RewritePair& pair) {
  return RuleFromTrees(pair.original, pair.rewritten);
}

PairOutcome ApplyToPair(const varsql::Rule& rule, const RewritePair& pair) {
  std::optional<sql::NodePtr> out = RewriteAlone(rule, pair.original);
  if (!out) return PairOutcome::kNotApplied;
  if (*out && sql::Equal(*out, pair.rewritten)) return PairOutcome::kExact;
  return PairOutcome::kDifferent;
}

bool Covers(const varsql::Rule& general, const varsql::Rule& specific) {
  std::optional<sql::NodePtr> out =
      RewriteAlone(general, specific.pattern.root);
  return out && *out && sql::Equal(*out, specific.replacement.root);
}

bool RuleSetCovers(const std::vector<varsql::Rule>& rules,
                   const std::vector<RewritePair>& pairs) {
  for (const RewritePair& pair : pairs) {
    bool exact = false;
    for (const varsql::Rule& rule : rules) {
      switch (ApplyToPair(rule, pair)) {
        case PairOutcome::kExact:
          exact = true;
          break;
        case PairOutcome::kDifferent:
          return false;
        case PairOutcome::kNotApplied:
          break;
      }
    }
    if (!exact) return false;
  }
  return true;
}

}  // namespace qb::suggest
