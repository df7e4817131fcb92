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

#include "qb/rewrite/engine.h"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "qb/sql/parser.h"
#include "qb/sql/serializer.h"
#include "qb/varsql/procedures.h"

namespace qb::rewrite {
namespace {

using sql::NodePtr;

void Note(std::vector<Diagnostic>* out, int64_t rule_id,
          const absl::Status& status) {
  if (out == nullptr) return;
  out->push_back({rule_id, KindOf(status), std::string(status.message())});
}

// Builds the rewritten query for one binding, or an error explaining why the
// application was discarded.
absl::StatusOr<NodePtr> Build(const varsql::Rule& rule, const NodePtr& query,
                              const sql::Path& site, Binding binding,
                              const ApplyOptions& options) {
  absl::StatusOr<NodePtr> inst = Instantiate(rule.replacement, binding);
  if (!inst.ok()) return inst.status();
  NodePtr tree = *inst;
  for (const varsql::ActionExpr& action : rule.actions) {
    absl::StatusOr<NodePtr> next = varsql::ApplyAction(action, tree, &binding);
    if (!next.ok()) return next.status();
    tree = *next;
  }
  NodePtr out = sql::Normalize(sql::ReplaceAt(query, site, tree));
  if (options.validate && out->concrete()) {
    std::string text = sql::Serialize(out, options.dialect);
    // Fragments (when the caller rewrites a predicate or expression
    // directly) are checked with the pattern parser.
    absl::StatusOr<NodePtr> reparsed;
    if (sql::LevelOf(out) == sql::FragmentLevel::kStatement) {
      reparsed = sql::ParseQuery(text, options.dialect);
    } else {
      absl::StatusOr<sql::Pattern> fragment =
          sql::ParsePattern(text, options.dialect);
      if (fragment.ok()) {
        reparsed = fragment->root;
      } else {
        reparsed = fragment.status();
      }
    }
    if (!reparsed.ok()) {
      return MakeError(ErrorKind::kParseError,
                       "rewritten query does not parse: " +
                           std::string(reparsed.status().message()));
    }
    if (!sql::Equal(*reparsed, out)) {
      return MakeError(ErrorKind::kParseError,
                       "rewritten query does not round-trip: " + text);
    }
  }
  return out;
}

}  // namespace

std::optional<NodePtr> ApplyRule(const varsql::Rule& rule,
                                 const NodePtr& query,
                                 const sql::SchemaCatalog* schema,
                                 std::vector<Diagnostic>* diagnostics,
                                 const ApplyOptions& options) {
  for (const sql::Path& site : MatchSites(rule.pattern, query)) {
    std::optional<NodePtr> result;
    auto accept = [&](const Binding& binding) {
      for (const varsql::ConstraintExpr& c : rule.constraints) {
        absl::StatusOr<bool> ok = varsql::EvalConstraint(c, binding, schema);
        if (!ok.ok()) {
          Note(diagnostics, rule.id, ok.status());
          return false;
        }
        if (!*ok) return false;
      }
      absl::StatusOr<NodePtr> out = Build(rule, query, site, binding, options);
      if (!out.ok()) {
        Note(diagnostics, rule.id, out.status());
        return false;
      }
      // A rewrite that changes nothing would never terminate by itself.
      if (sql::Equal(*out, query)) return false;
      result = *out;
      return true;
    };
    absl::StatusOr<bool> matched =
        MatchAt(rule.pattern, sql::NodeAt(query, site), accept, options.match);
    if (!matched.ok()) {
      Note(diagnostics, rule.id, matched.status());
      return std::nullopt;
    }
    if (*matched) return result;
  }
  return std::nullopt;
}

const char* TerminationName(Termination t) {
  switch (t) {
    case Termination::kFixpoint:
      return "fixpoint";
    case Termination::kCycle:
      return "cycle";
    case Termination::kStepLimit:
      return "step_limit";
  }
  return "fixpoint";
}

std::vector<const varsql::Rule*> OrderRules(
    const std::vector<varsql::Rule>& rules) {
  std::vector<const varsql::Rule*> out;
  for (const varsql::Rule& r : rules) {
    if (r.enabled) out.push_back(&r);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const varsql::Rule* a, const varsql::Rule* b) {
                     if (a->priority != b->priority) {
                       return a->priority > b->priority;
                     }
                     return a->id < b->id;
                   });
  return out;
}

RewriteResult Rewrite(const NodePtr& query,
                      const std::vector<varsql::Rule>& rules,
                      const sql::SchemaCatalog* schema,
                      const RewriteLimits& limits) {
  RewriteResult result;
  result.query = query;
  std::vector<const varsql::Rule*> ordered = OrderRules(rules);
  std::unordered_set<NodePtr, sql::NodeHash, sql::NodeEq> seen = {query};

  auto step = [&](const NodePtr& q, std::vector<Diagnostic>* diags)
      -> std::optional<std::pair<int64_t, NodePtr>> {
    for (const varsql::Rule* rule : ordered) {
      std::optional<NodePtr> next =
          ApplyRule(*rule, q, schema, diags, limits.apply);
      if (next) return std::make_pair(rule->id, *next);
    }
    return std::nullopt;
  };

  for (int i = 0; i < limits.max_steps; ++i) {
    auto next = step(result.query, &result.trace.diagnostics);
    if (!next) {
      result.trace.terminated_by = Termination::kFixpoint;
      return result;
    }
    result.trace.steps.push_back({next->first, result.query, next->second});
    result.query = next->second;
    if (!seen.insert(result.query).second) {
      result.trace.terminated_by = Termination::kCycle;
      return result;
    }
  }
  // The limit was reached; it only counts if another step was possible.
  result.trace.terminated_by = step(result.query, nullptr)
                                   ? Termination::kStepLimit
                                   : Termination::kFixpoint;
  return result;
}

nlohmann::json TraceToJson(const RewriteTrace& trace, sql::Dialect dialect) {
  nlohmann::json steps = nlohmann::json::array();
  for (const RewriteStep& s : trace.steps) {
    steps.push_back({{"rule_id", s.rule_id},
                     {"before", sql::Serialize(s.before, dialect)},
                     {"after", sql::Serialize(s.after, dialect)}});
  }
  nlohmann::json diags = nlohmann::json::array();
  for (const Diagnostic& d : trace.diagnostics) {
    diags.push_back({{"rule_id", d.rule_id},
                     {"kind", ErrorKindName(d.kind)},
                     {"message", d.message}});
  }
  return {{"steps", steps},
          {"terminated_by", TerminationName(trace.terminated_by)},
          {"diagnostics", diags}};
}

}  // namespace qb::rewrite
