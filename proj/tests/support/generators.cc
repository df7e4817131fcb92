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

#include "generators.h"

#include "qb/sql/parser.h"
#include "qb/sql/serializer.h"

namespace qb::testing {
namespace {

template <typename T>
const T& Pick(const std::vector<T>& items, std::mt19937& rng) {
  return items[std::uniform_int_distribution<size_t>(0, items.size() - 1)(rng)];
}

int Uniform(int lo, int hi, std::mt19937& rng) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::string Expr(int depth, std::mt19937& rng) {
  static const std::vector<std::string> kLeaves = {"a", "b", "c", "0", "1",
                                                   "2"};
  static const std::vector<std::string> kOps = {"+", "-", "*"};
  if (depth == 0 || Uniform(0, 2, rng) == 0) return Pick(kLeaves, rng);
  return Expr(depth - 1, rng) + " " + Pick(kOps, rng) + " " +
         Expr(depth - 1, rng);
}

std::string Predicate(std::mt19937& rng) {
  switch (Uniform(0, 4, rng)) {
    case 0:
      return Expr(2, rng) + " > " + Expr(2, rng);
    case 1:
      return Expr(1, rng) + " < " + Expr(1, rng);
    case 2:
      return "STRPOS(LOWER(" + Pick<std::string>({"a", "b", "c"}, rng) +
             "), 'k" + std::to_string(Uniform(0, 9, rng)) + "') > 0";
    case 3:
      return Pick<std::string>({"a", "b"}, rng) + " IN (" +
             std::to_string(Uniform(0, 5, rng)) + ")";
    default:
      return Pick<std::string>({"a", "c"}, rng) +
             " = TIMESTAMP('2018-04-0" + std::to_string(Uniform(1, 9, rng)) +
             "')";
  }
}

std::string Word(std::mt19937& rng) {
  static const std::vector<std::string> kWords = {
      "covid", "mask", "vaccine", "gift", "rush", "news", "sale", "promo",
      "iphone", "storm"};
  return Pick(kWords, rng);
}

std::string Table(std::mt19937& rng) {
  return Pick<std::string>({"tweets", "orders", "users", "events"}, rng);
}

std::string Column(std::mt19937& rng) {
  return Pick<std::string>({"content", "note", "status", "title", "body"},
                           rng);
}

std::string Projection(std::mt19937& rng) {
  return Pick<std::string>({"*", "id", "id, name", "COUNT(*)"}, rng);
}

}  // namespace

const std::vector<std::string>& TerminationRulePool() {
  static const std::vector<std::string> kPool = {
      "<x> + 0 --> <x>",
      "<x> - 0 --> <x> + 0",
      "<x> + <y> --> <y> + <x>",
      "<x> * 1 --> <x> * 1 * 1",
      "<x> > <y> --> <y> < <x>",
      "<x> < <y> --> <y> > <x>",
      "STRPOS(LOWER(<x>), '<y>') > 0 --> <x> ILIKE '%<y>%'",
      "<x> IN (<y>) --> <x> = <y>",
      "<x> = TIMESTAMP(<y>) --> <x> = <y>",
      "<x> * 0 --> 0",
      "<x> = <y> --> <y> = <x>",
      "<x> ILIKE '%<y>%' --> STRPOS(LOWER(<x>), '<y>') > 0",
  };
  return kPool;
}

TerminationInstance MakeTerminationInstance(std::mt19937& rng) {
  TerminationInstance instance;
  const std::vector<std::string>& pool = TerminationRulePool();
  int count = Uniform(1, 5, rng);
  for (int i = 0; i < count; ++i) {
    absl::StatusOr<varsql::Rule> rule = varsql::ParseRule(Pick(pool, rng));
    if (!rule.ok()) continue;
    rule->id = i + 1;
    rule->priority = Uniform(0, 2, rng);
    instance.rules.push_back(*rule);
  }
  instance.query = "SELECT " + Expr(2, rng) + ", " + Expr(1, rng) +
                   " FROM t WHERE " + Predicate(rng) + " AND " +
                   Predicate(rng);
  static const std::vector<int> kLimits = {4, 16, 64};
  instance.max_steps = Pick(kLimits, rng);
  return instance;
}

std::string CheckTermination(const TerminationInstance& instance) {
  absl::StatusOr<sql::NodePtr> query = sql::ParseQuery(instance.query);
  if (!query.ok()) return "query does not parse: " + instance.query;
  rewrite::RewriteLimits limits;
  limits.max_steps = instance.max_steps;
  rewrite::RewriteResult result =
      rewrite::Rewrite(*query, instance.rules, nullptr, limits);
  const rewrite::RewriteTrace& trace = result.trace;
  if (static_cast<int>(trace.steps.size()) > instance.max_steps) {
    return "more steps than max_steps";
  }
  sql::NodePtr current = *query;
  for (const rewrite::RewriteStep& step : trace.steps) {
    if (!sql::Equal(step.before, current)) return "steps do not chain";
    current = step.after;
  }
  if (!sql::Equal(result.query, current)) {
    return "result is not the last query of the chain";
  }
  switch (trace.terminated_by) {
    case rewrite::Termination::kFixpoint:
      for (const varsql::Rule& rule : instance.rules) {
        if (rewrite::ApplyRule(rule, result.query, nullptr)) {
          return "fixpoint reported but rule " + std::to_string(rule.id) +
                 " still fires";
        }
      }
      break;
    case rewrite::Termination::kCycle: {
      if (trace.steps.empty()) return "cycle without steps";
      bool repeated = sql::Equal(*query, result.query);
      for (size_t i = 0; i + 1 < trace.steps.size() && !repeated; ++i) {
        repeated = sql::Equal(trace.steps[i].after, result.query);
      }
      if (!repeated) return "cycle result does not repeat an earlier query";
      break;
    }
    case rewrite::Termination::kStepLimit:
      if (static_cast<int>(trace.steps.size()) != instance.max_steps) {
        return "step_limit before max_steps";
      }
      break;
  }
  rewrite::RewriteResult again =
      rewrite::Rewrite(*query, instance.rules, nullptr, limits);
  if (rewrite::TraceToJson(again.trace) != rewrite::TraceToJson(trace)) {
    return "rewrite is not deterministic";
  }
  return "";
}

ExamplePair MakeTemplatePair(int template_id, std::mt19937& rng) {
  std::string head = "SELECT " + Projection(rng) + " FROM " + Table(rng) +
                     " WHERE ";
  std::string col = Column(rng);
  switch (template_id) {
    case 0: {
      std::string w = Word(rng);
      return {head + "STRPOS(LOWER(" + col + "), '" + w + "') > 0",
              head + col + " ILIKE '%" + w + "%'"};
    }
    case 1: {
      std::string v = std::to_string(Uniform(1, 999, rng));
      return {head + col + " IN (" + v + ")", head + col + " = " + v};
    }
    case 2: {
      std::string d = "2018-0" + std::to_string(Uniform(1, 9, rng)) + "-01";
      return {head + col + " = TIMESTAMP('" + d + "')",
              head + col + " = '" + d + "'"};
    }
    case 3: {
      std::string v = std::to_string(Uniform(1, 99, rng));
      return {head + col + " + 0 > " + v, head + col + " > " + v};
    }
    default: {
      std::string w = Word(rng);
      return {head + "CAST(" + col + " AS TEXT) = '" + w + "'",
              head + col + " = '" + w + "'"};
    }
  }
}

std::vector<ExamplePair> MakeExampleSet(std::mt19937& rng) {
  int first = Uniform(0, kTemplateCount - 1, rng);
  int second = Uniform(0, kTemplateCount - 1, rng);
  int count = Uniform(1, 4, rng);
  std::vector<ExamplePair> pairs;
  while (static_cast<int>(pairs.size()) < count) {
    ExamplePair p = MakeTemplatePair(Uniform(0, 1, rng) ? first : second, rng);
    bool duplicate = false;
    for (const ExamplePair& q : pairs) {
      duplicate = duplicate || q.original == p.original;
    }
    if (!duplicate) pairs.push_back(p);
  }
  return pairs;
}

std::string CheckCoversExactly(const std::vector<varsql::Rule>& rules,
                               const std::vector<suggest::RewritePair>& pairs) {
  for (size_t i = 0; i < pairs.size(); ++i) {
    rewrite::RewriteResult out =
        rewrite::Rewrite(pairs[i].original, rules, nullptr);
    if (!sql::Equal(out.query, pairs[i].rewritten)) {
      return "pair " + std::to_string(i) + " rewrites to " +
             sql::Serialize(out.query) + " instead of " +
             pairs[i].rewritten_sql;
    }
  }
  return "";
}

}  // namespace qb::testing
