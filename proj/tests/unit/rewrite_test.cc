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

#include <optional>
#include <string>
#include <vector>

#include "acceptance_checks.h"
#include "gtest/gtest.h"
#include "qb/rewrite/engine.h"
#include "qb/rewrite/matcher.h"
#include "qb/sql/parser.h"
#include "qb/sql/schema.h"
#include "qb/sql/serializer.h"
#include "qb/status.h"
#include "qb/varsql/rule.h"

namespace qb::rewrite {
namespace {

using ::qb::testing::DataPath;

sql::NodePtr Q(const std::string& text,
               sql::Dialect dialect = sql::Dialect::kGeneric) {
  absl::StatusOr<sql::NodePtr> q = sql::ParseQuery(text, dialect);
  EXPECT_TRUE(q.ok()) << text << ": " << q.status();
  return q.ok() ? *q : nullptr;
}

varsql::Rule R(const std::string& text, int64_t id = 1, int priority = 0) {
  absl::StatusOr<varsql::Rule> r = varsql::ParseRule(text);
  EXPECT_TRUE(r.ok()) << text << ": " << r.status();
  varsql::Rule rule = r.ok() ? *r : varsql::Rule{};
  rule.id = id;
  rule.priority = priority;
  return rule;
}

std::vector<varsql::Rule> Bundled() {
  absl::StatusOr<std::vector<varsql::Rule>> rules =
      varsql::LoadRuleFile(DataPath("rules/bundled_rules.json"));
  EXPECT_TRUE(rules.ok()) << rules.status();
  return rules.ok() ? *rules : std::vector<varsql::Rule>{};
}

const char kStrposRule[] =
    "STRPOS(LOWER(<x>), '<y>') > 0 --> <x> ILIKE '%<y>%'";

TEST(MatchTest, StrposBinding) {
  varsql::Rule rule = R(kStrposRule);
  absl::StatusOr<std::optional<MatchResult>> m =
      MatchFirst(rule.pattern, Q(::qb::testing::kStrposOriginal));
  ASSERT_TRUE(m.ok()) << m.status();
  ASSERT_TRUE(m->has_value());
  const Binding& b = (*m)->binding;
  ASSERT_EQ(b.element.count("x"), 1u);
  EXPECT_EQ(sql::Serialize(b.element.at("x")), "\"content\"");
  ASSERT_EQ(b.string_parts.count("y"), 1u);
  EXPECT_EQ(b.string_parts.at("y"), "covid");
}

TEST(MatchTest, SelfJoinBinding) {
  varsql::Rule rule = Bundled().at(1);
  std::optional<Binding> b =
      Match(rule.pattern, Q(::qb::testing::kSelfJoinQuery));
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(sql::Serialize(b->element.at("t1")), "employee e1");
  EXPECT_EQ(sql::Serialize(b->element.at("t2")), "employee e2");
  EXPECT_EQ(sql::Serialize(b->element.at("a1")), "id");
  EXPECT_EQ(b->set.at("s").size(), 3u);
  ASSERT_EQ(b->set.at("p").size(), 2u);
}

TEST(MatchTest, FromListIsOrderInsensitive) {
  varsql::Rule rule =
      R("SELECT <<s>> FROM a, b --> SELECT <<s>> FROM b", 1);
  EXPECT_TRUE(Match(rule.pattern, Q("SELECT x FROM b, a")).has_value());
  EXPECT_TRUE(Match(rule.pattern, Q("SELECT x FROM a, b")).has_value());
  EXPECT_FALSE(Match(rule.pattern, Q("SELECT x FROM a, c")).has_value());
}

TEST(MatchTest, ConjunctionIsOrderInsensitive) {
  varsql::Rule rule = R("<a> = 1 AND <b> = 2 --> <a> = 1", 1);
  EXPECT_TRUE(Match(rule.pattern, Q("SELECT * FROM t WHERE y = 2 AND x = 1"))
                  .has_value());
}

TEST(MatchTest, RepeatedVariableMustAgree) {
  varsql::Rule rule = R("<x> = <x> --> TRUE", 1);
  EXPECT_TRUE(Match(rule.pattern, Q("SELECT * FROM t WHERE a = a")));
  EXPECT_FALSE(Match(rule.pattern, Q("SELECT * FROM t WHERE a = b")));
}

TEST(InstantiateTest, IdentityRoundTrip) {
  varsql::Rule rule = R("SELECT <<s>> FROM <t> WHERE <<p>> --> "
                        "SELECT <<s>> FROM <t> WHERE <<p>>");
  sql::NodePtr q = Q("SELECT a, b FROM t WHERE a > 1 AND b < 2");
  std::optional<Binding> b = Match(rule.pattern, q);
  ASSERT_TRUE(b.has_value());
  absl::StatusOr<sql::NodePtr> out = Instantiate(rule.replacement, *b);
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_TRUE(sql::Equal(*out, q));
}

TEST(InstantiateTest, EmptySetDropsWhereTail) {
  varsql::Rule rule = Bundled().at(1);
  absl::StatusOr<sql::SchemaCatalog> schema =
      sql::SchemaCatalog::FromFile(DataPath("schemas/employee.json"));
  ASSERT_TRUE(schema.ok());
  std::optional<sql::NodePtr> out = ApplyRule(
      rule, Q("SELECT e1.name FROM employee e1, employee e2 "
              "WHERE e1.id = e2.id"),
      &*schema);
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(sql::Serialize(*out), "SELECT e1.name FROM employee e1");
}

TEST(EngineTest, StrposGolden) {
  RewriteResult r = Rewrite(Q(::qb::testing::kStrposOriginal), Bundled(),
                            nullptr);
  EXPECT_EQ(sql::Serialize(r.query), ::qb::testing::kStrposRewritten);
  EXPECT_EQ(r.trace.steps.size(), 1u);
  EXPECT_EQ(r.trace.terminated_by, Termination::kFixpoint);
}

TEST(EngineTest, SelfJoinNeedsUniqueness) {
  absl::StatusOr<sql::SchemaCatalog> unique =
      sql::SchemaCatalog::FromFile(DataPath("schemas/employee.json"));
  absl::StatusOr<sql::SchemaCatalog> plain = sql::SchemaCatalog::FromFile(
      DataPath("schemas/employee_nonunique.json"));
  ASSERT_TRUE(unique.ok() && plain.ok());
  sql::NodePtr q = Q(::qb::testing::kSelfJoinQuery);
  RewriteResult yes = Rewrite(q, Bundled(), &*unique);
  EXPECT_EQ(sql::Serialize(yes.query), ::qb::testing::kSelfJoinExpected);
  RewriteResult no = Rewrite(q, Bundled(), &*plain);
  EXPECT_TRUE(sql::Equal(no.query, q));
  EXPECT_TRUE(no.trace.steps.empty());
  // Without a catalog the UNIQUE constraint cannot hold; the query is kept.
  RewriteResult none = Rewrite(q, Bundled(), nullptr);
  EXPECT_TRUE(sql::Equal(none.query, q));
  ASSERT_FALSE(none.trace.diagnostics.empty());
  EXPECT_EQ(none.trace.diagnostics[0].kind, ErrorKind::kMissingSchema);
}

TEST(EngineTest, MySqlTimestampCast) {
  const char kIn[] =
      "SELECT COUNT(*) FROM tweets WHERE adddate(date_format(`created_at`, "
      "'%Y-%m-01 00:00:00'), INTERVAL 0 SECOND) = "
      "TIMESTAMP('2018-04-01 00:00:00')";
  const char kOut[] =
      "SELECT COUNT(*) FROM tweets WHERE adddate(date_format(`created_at`, "
      "'%Y-%m-01 00:00:00'), INTERVAL 0 SECOND) = '2018-04-01 00:00:00'";
  RewriteLimits limits;
  limits.apply.dialect = sql::Dialect::kMySql;
  RewriteResult r =
      Rewrite(Q(kIn, sql::Dialect::kMySql), Bundled(), nullptr, limits);
  EXPECT_EQ(sql::Serialize(r.query, sql::Dialect::kMySql), kOut);
}

TEST(EngineTest, InverseRulesStopOnCycle) {
  std::vector<varsql::Rule> rules = {R("<x> > <y> --> <y> < <x>", 1),
                                     R("<x> < <y> --> <y> > <x>", 2)};
  sql::NodePtr a = Q("SELECT * FROM t WHERE a > 1");
  RewriteResult r = Rewrite(a, rules, nullptr);
  EXPECT_EQ(r.trace.terminated_by, Termination::kCycle);
  EXPECT_TRUE(sql::Equal(r.query, a));
  EXPECT_EQ(r.trace.steps.size(), 2u);
}

TEST(EngineTest, EachConjunctRewritesInItsOwnStep) {
  RewriteResult r = Rewrite(
      Q("SELECT * FROM t WHERE STRPOS(LOWER(a), 'x') > 0 AND "
        "STRPOS(LOWER(b), 'y') > 0"),
      {R(kStrposRule)}, nullptr);
  EXPECT_EQ(r.trace.steps.size(), 2u);
  EXPECT_EQ(sql::Serialize(r.query),
            "SELECT * FROM t WHERE a ILIKE '%x%' AND b ILIKE '%y%'");
  EXPECT_EQ(r.trace.terminated_by, Termination::kFixpoint);
}

TEST(EngineTest, StepLimit) {
  std::vector<varsql::Rule> rules = {R("<x> * 1 --> <x> * 1 * 1", 1)};
  RewriteLimits limits;
  limits.max_steps = 5;
  RewriteResult r = Rewrite(Q("SELECT a * 1 FROM t"), rules, nullptr, limits);
  EXPECT_EQ(r.trace.terminated_by, Termination::kStepLimit);
  EXPECT_EQ(r.trace.steps.size(), 5u);
}

TEST(EngineTest, HigherPriorityFiresFirst) {
  varsql::Rule ilike = R(kStrposRule, 1, 0);
  varsql::Rule like =
      R("STRPOS(LOWER(<x>), '<y>') > 0 --> LOWER(<x>) LIKE '%<y>%'", 2, 5);
  sql::NodePtr q = Q("SELECT * FROM t WHERE STRPOS(LOWER(a), 'x') > 0");
  RewriteResult r = Rewrite(q, {ilike, like}, nullptr);
  ASSERT_FALSE(r.trace.steps.empty());
  EXPECT_EQ(r.trace.steps[0].rule_id, 2);
  like.priority = 0;
  r = Rewrite(q, {like, ilike}, nullptr);
  ASSERT_FALSE(r.trace.steps.empty());
  EXPECT_EQ(r.trace.steps[0].rule_id, 1);
  like.enabled = false;
  r = Rewrite(q, {like}, nullptr);
  EXPECT_TRUE(r.trace.steps.empty());
}

TEST(EngineTest, Deterministic) {
  std::vector<varsql::Rule> rules = Bundled();
  rules.push_back(R("<x> + 0 --> <x>", 9));
  sql::NodePtr q = Q("SELECT a + 0 FROM t WHERE STRPOS(LOWER(a + 0), 'x') > 0");
  nlohmann::json first = TraceToJson(Rewrite(q, rules, nullptr).trace);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(TraceToJson(Rewrite(q, rules, nullptr).trace), first);
  }
}

TEST(EngineTest, OversizedPermutationIsDiagnosed) {
  std::string where;
  for (int i = 1; i <= 13; ++i) {
    if (i > 1) where += " AND ";
    where += "c" + std::to_string(i) + " = " + std::to_string(i);
  }
  sql::NodePtr q = Q("SELECT * FROM t WHERE " + where);
  varsql::Rule rule =
      R("<a> = 1 AND <b> = 2 AND <<p>> --> <a> = 1 AND <<p>>", 4);
  absl::StatusOr<std::optional<MatchResult>> m =
      MatchFirst(rule.pattern, q);
  ASSERT_FALSE(m.ok());
  EXPECT_EQ(KindOf(m.status()), ErrorKind::kMatchTooLarge);
  RewriteResult r = Rewrite(q, {rule}, nullptr);
  EXPECT_TRUE(sql::Equal(r.query, q));
  ASSERT_FALSE(r.trace.diagnostics.empty());
  EXPECT_EQ(r.trace.diagnostics[0].kind, ErrorKind::kMatchTooLarge);
  // Raising the cap admits the search.
  MatchLimits wide;
  wide.max_permuted_list = 13;
  m = MatchFirst(rule.pattern, q, wide);
  ASSERT_TRUE(m.ok()) << m.status();
  EXPECT_TRUE(m->has_value());
}

}  // namespace
}  // namespace qb::rewrite
