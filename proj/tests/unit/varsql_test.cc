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
#include "qb/varsql/procedures.h"
#include "qb/varsql/rule.h"

namespace qb::varsql {
namespace {

using ::qb::testing::DataPath;

const char kSelfJoinRule[] =
    "SELECT <<s>> FROM <t1>, <t2> WHERE <t1>.<a1> = <t2>.<a2> AND <<p>> "
    "/ SAME(t1, t2); SAME(a1, a2); UNIQUE(t1, a1) "
    "--> SELECT <<s>> FROM <t1> WHERE <<p>> "
    "/ Substitute(s, t2, t1); Substitute(p, t2, t1)";

sql::NodePtr Q(const std::string& text) { return *sql::ParseQuery(text); }

TEST(ParseRuleTest, StrposRule) {
  absl::StatusOr<Rule> r =
      ParseRule("STRPOS(LOWER(<x>), '<y>') > 0 --> <x> ILIKE '%<y>%'");
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_TRUE(r->constraints.empty());
  EXPECT_TRUE(r->actions.empty());
  EXPECT_EQ(r->pattern.level, sql::FragmentLevel::kPredicate);
  EXPECT_EQ(r->priority, 0);
  EXPECT_TRUE(r->enabled);
}

TEST(ParseRuleTest, SelfJoinRule) {
  absl::StatusOr<Rule> r = ParseRule(kSelfJoinRule);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_GE(r->constraints.size(), 1u);
  EXPECT_EQ(r->actions.size(), 2u);
  EXPECT_EQ(r->actions[0].name, "Substitute");
  EXPECT_EQ(r->pattern.level, sql::FragmentLevel::kStatement);
}

TEST(ParseRuleTest, AndSeparatedConstraints) {
  absl::StatusOr<Rule> r = ParseRule(
      "SELECT <<s>> FROM <t1>, <t2> WHERE <t1>.<a1> = <t2>.<a2> AND <<p>> "
      "/ SAME(t1, t2) AND UNIQUE(t1, a1) --> SELECT <<s>> FROM <t1> WHERE "
      "<<p>> / Substitute(s, t2, t1); Substitute(p, t2, t1)");
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->constraints.size(), 2u);
}

TEST(ParseRuleTest, Errors) {
  absl::StatusOr<Rule> unbound = ParseRule("<x> --> <y>");
  ASSERT_FALSE(unbound.ok());
  EXPECT_EQ(KindOf(unbound.status()), ErrorKind::kUnboundVariable);
  absl::StatusOr<Rule> unknown = ParseRule("<x> + 0 / FOO(x) --> <x>");
  ASSERT_FALSE(unknown.ok());
  EXPECT_EQ(KindOf(unknown.status()), ErrorKind::kUnknownProcedure);
  absl::StatusOr<Rule> arity = ParseRule("<x> + 0 / UNIQUE(x) --> <x>");
  EXPECT_FALSE(arity.ok());
  absl::StatusOr<Rule> levels = ParseRule("SELECT <x> FROM t --> <x>");
  EXPECT_FALSE(levels.ok());
  EXPECT_FALSE(ParseRule("<x> + 0").ok());
}

TEST(ParseRuleTest, DivisionIsNotASectionSeparator) {
  absl::StatusOr<Rule> r = ParseRule("<x> / 1 --> <x>");
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_TRUE(r->constraints.empty());
  EXPECT_EQ(sql::Serialize(r->pattern.root), "<x> / 1");
}

TEST(RuleRoundTripTest, SerializeThenParse) {
  std::vector<std::string> sources = ::qb::testing::MdlOracleRules();
  sources.push_back(kSelfJoinRule);
  sources.push_back("<x> = TIMESTAMP(<y>) / IS_STRING(y) --> <x> = <y>");
  for (const std::string& text : sources) {
    absl::StatusOr<Rule> r = ParseRule(text);
    ASSERT_TRUE(r.ok()) << text << ": " << r.status();
    std::string out = SerializeRule(*r);
    absl::StatusOr<Rule> back = ParseRule(out);
    ASSERT_TRUE(back.ok()) << out << ": " << back.status();
    EXPECT_TRUE(SameRuleBody(*r, *back)) << out;
    EXPECT_EQ(SerializeRule(*back), out);
  }
}

TEST(RuleJsonTest, FileRoundTrip) {
  absl::StatusOr<std::vector<Rule>> rules =
      LoadRuleFile(DataPath("rules/bundled_rules.json"));
  ASSERT_TRUE(rules.ok()) << rules.status();
  ASSERT_GE(rules->size(), 3u);
  absl::StatusOr<std::vector<Rule>> again =
      ParseRuleFile(RulesToJsonText(*rules));
  ASSERT_TRUE(again.ok()) << again.status();
  ASSERT_EQ(again->size(), rules->size());
  for (size_t i = 0; i < rules->size(); ++i) {
    EXPECT_TRUE(SameRuleBody((*rules)[i], (*again)[i]));
    EXPECT_EQ((*rules)[i].id, (*again)[i].id);
    EXPECT_EQ((*rules)[i].name, (*again)[i].name);
  }
  nlohmann::json j = RuleToJson((*rules)[0]);
  for (const char* key : {"id", "name", "pattern", "constraints",
                          "replacement", "actions", "priority", "workspace",
                          "enabled"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(RegistryTest, BuiltinsPresent) {
  for (const char* name :
       {"UNIQUE", "IS_COLUMN", "IS_LITERAL", "IS_STRING", "NOT_NULL", "SAME"}) {
    EXPECT_NE(FindConstraint(name), nullptr) << name;
  }
  EXPECT_NE(FindAction("Substitute"), nullptr);
  EXPECT_EQ(FindConstraint("Substitute"), nullptr);
}

ProcedureCall Call(const std::string& name, std::vector<std::string> vars) {
  ProcedureCall c{name, {}};
  for (const std::string& v : vars) {
    c.args.push_back({ProcArg::Kind::kVariable, v});
  }
  return c;
}

TEST(EvalConstraintTest, UniqueFollowsSchema) {
  absl::StatusOr<sql::SchemaCatalog> unique =
      sql::SchemaCatalog::FromFile(DataPath("schemas/employee.json"));
  absl::StatusOr<sql::SchemaCatalog> plain = sql::SchemaCatalog::FromFile(
      DataPath("schemas/employee_nonunique.json"));
  ASSERT_TRUE(unique.ok() && plain.ok());
  sql::NodePtr from = sql::FindClause(Q("SELECT * FROM employee e1"),
                                      sql::NodeKind::kFrom);
  rewrite::Binding b;
  b.element["t1"] = from->child(0);
  b.element["a1"] = sql::MakeIdentifier("id");
  ProcedureCall call = Call("UNIQUE", {"t1", "a1"});
  absl::StatusOr<bool> yes = EvalConstraint(call, b, &*unique);
  ASSERT_TRUE(yes.ok()) << yes.status();
  EXPECT_TRUE(*yes);
  absl::StatusOr<bool> no = EvalConstraint(call, b, &*plain);
  ASSERT_TRUE(no.ok());
  EXPECT_FALSE(*no);
  absl::StatusOr<bool> missing = EvalConstraint(call, b, nullptr);
  ASSERT_FALSE(missing.ok());
  EXPECT_EQ(KindOf(missing.status()), ErrorKind::kMissingSchema);
  // Pure: a second evaluation gives the same answer.
  EXPECT_EQ(*EvalConstraint(call, b, &*unique), *yes);
}

TEST(EvalConstraintTest, LiteralPredicates) {
  rewrite::Binding b;
  b.element["x"] = sql::MakeNumber("0");
  b.element["s"] = sql::MakeString("covid");
  b.element["c"] = sql::MakeIdentifier("content");
  EXPECT_TRUE(*EvalConstraint(Call("IS_LITERAL", {"x"}), b, nullptr));
  EXPECT_FALSE(*EvalConstraint(Call("IS_STRING", {"x"}), b, nullptr));
  EXPECT_TRUE(*EvalConstraint(Call("IS_STRING", {"s"}), b, nullptr));
  EXPECT_FALSE(*EvalConstraint(Call("IS_LITERAL", {"c"}), b, nullptr));
  absl::StatusOr<bool> unbound =
      EvalConstraint(Call("IS_LITERAL", {"nope"}), b, nullptr);
  ASSERT_FALSE(unbound.ok());
  EXPECT_EQ(KindOf(unbound.status()), ErrorKind::kUnboundVariable);
}

TEST(ApplyActionTest, SubstituteRewritesQualifiers) {
  sql::NodePtr q = Q("SELECT e1.name, e1.age, e2.salary FROM employee e1, "
                     "employee e2");
  sql::NodePtr from = sql::FindClause(q, sql::NodeKind::kFrom);
  sql::NodePtr list = sql::FindClause(q, sql::NodeKind::kSelectList);
  rewrite::Binding b;
  b.set["s"] = list->children();
  b.element["t1"] = from->child(0);
  b.element["t2"] = from->child(1);
  sql::NodePtr before = q;
  absl::StatusOr<sql::NodePtr> out =
      ApplyAction(Call("Substitute", {"s", "t2", "t1"}), q, &b);
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(sql::Serialize(*out),
            "SELECT e1.name, e1.age, e1.salary FROM employee e1, employee e2");
  EXPECT_TRUE(sql::Equal(q, before));
  EXPECT_EQ(sql::Serialize(q),
            "SELECT e1.name, e1.age, e2.salary FROM employee e1, employee e2");
}

TEST(ApplyActionTest, SubstituteWithoutReferencesIsNoOp) {
  sql::NodePtr q = Q("SELECT e1.name FROM employee e1, employee e2");
  sql::NodePtr from = sql::FindClause(q, sql::NodeKind::kFrom);
  rewrite::Binding b;
  b.set["s"] = sql::FindClause(q, sql::NodeKind::kSelectList)->children();
  b.element["t1"] = from->child(0);
  b.element["t2"] = from->child(1);
  absl::StatusOr<sql::NodePtr> out =
      ApplyAction(Call("Substitute", {"s", "t2", "t1"}), q, &b);
  ASSERT_TRUE(out.ok());
  EXPECT_TRUE(sql::Equal(*out, q));
}

TEST(ApplyActionTest, MissingScope) {
  sql::NodePtr q = Q("SELECT e1.name FROM employee e1, employee e2");
  sql::NodePtr from = sql::FindClause(q, sql::NodeKind::kFrom);
  rewrite::Binding b;
  b.set["s"] = {sql::MakeIdentifier("elsewhere")};
  b.element["t1"] = from->child(0);
  b.element["t2"] = from->child(1);
  absl::StatusOr<sql::NodePtr> out =
      ApplyAction(Call("Substitute", {"s", "t2", "t1"}), q, &b);
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(KindOf(out.status()), ErrorKind::kScopeNotFound);
  b.set.erase("s");
  out = ApplyAction(Call("Substitute", {"s", "t2", "t1"}), q, &b);
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(KindOf(out.status()), ErrorKind::kUnboundVariable);
}

// Two chained Substitute actions apply left to right, so their order shows
// in the output.
TEST(ApplyActionTest, ChainedSubstitutesAreOrderDependent) {
  sql::NodePtr q = Q("SELECT a.x, b.y, c.z FROM a, b, c");
  const char* head = "SELECT <<s>> FROM <t1>, <t2>, <t3> --> "
                     "SELECT <<s>> FROM <t1>, <t2>, <t3> / ";
  absl::StatusOr<Rule> forward = ParseRule(
      std::string(head) + "Substitute(s, t2, t1); Substitute(s, t1, t3)");
  absl::StatusOr<Rule> backward = ParseRule(
      std::string(head) + "Substitute(s, t1, t3); Substitute(s, t2, t1)");
  ASSERT_TRUE(forward.ok()) << forward.status();
  ASSERT_TRUE(backward.ok()) << backward.status();
  std::optional<sql::NodePtr> f = rewrite::ApplyRule(*forward, q, nullptr);
  std::optional<sql::NodePtr> g = rewrite::ApplyRule(*backward, q, nullptr);
  ASSERT_TRUE(f.has_value() && g.has_value());
  EXPECT_EQ(sql::Serialize(*f), "SELECT c.x, c.y, c.z FROM a, b, c");
  EXPECT_EQ(sql::Serialize(*g), "SELECT c.x, a.y, c.z FROM a, b, c");
}

}  // namespace
}  // namespace qb::varsql
