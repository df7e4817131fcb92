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

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "acceptance_checks.h"
#include "gtest/gtest.h"
#include "mdl_oracle.h"
#include "qb/status.h"
#include "qb/suggest/coverage.h"
#include "qb/suggest/distance.h"
#include "qb/suggest/explore.h"
#include "qb/suggest/mdl.h"
#include "qb/suggest/suggest.h"
#include "qb/suggest/transform.h"
#include "qb/varsql/rule.h"

namespace qb::suggest {
namespace {

using ::qb::testing::LoadPairs;

varsql::Rule R(const std::string& text) {
  absl::StatusOr<varsql::Rule> r = varsql::ParseRule(text);
  EXPECT_TRUE(r.ok()) << text << ": " << r.status();
  return r.ok() ? *r : varsql::Rule{};
}

Rational Oracle(const std::string& text) {
  ::qb::testing::Fraction f = ::qb::testing::OracleDescriptionLength(text);
  Rational r{f.num};
  r /= f.den;
  return r;
}

std::vector<int> InternPairs(RuleGraph& graph,
                             const std::vector<RewritePair>& pairs) {
  std::vector<int> base;
  for (const RewritePair& p : pairs) {
    std::optional<varsql::Rule> r = FinishCandidate(PairAsRule(p));
    EXPECT_TRUE(r.has_value());
    absl::StatusOr<int> id = graph.Intern(*r, 0);
    EXPECT_TRUE(id.ok());
    base.push_back(*id);
  }
  return base;
}

TEST(StrategyTest, Parse) {
  EXPECT_EQ(ParseStrategy("bf")->strategy, Strategy::kBruteForce);
  EXPECT_EQ(ParseStrategy("khn:3")->k, 3);
  EXPECT_EQ(ParseStrategy("khn")->k, 2);
  EXPECT_EQ(ParseStrategy("mpn")->m, kDefaultPromisingM);
  EXPECT_EQ(ParseStrategy("mpn:7")->m, 7);
  EXPECT_EQ(StrategyName(*ParseStrategy("khn:3")), "khn:3");
  for (const char* bad : {"xyz", "khn:0", "mpn:-1", "khn:a", "bf:2"}) {
    absl::StatusOr<ExplorerConfig> c = ParseStrategy(bad);
    ASSERT_FALSE(c.ok()) << bad;
    EXPECT_EQ(KindOf(c.status()), ErrorKind::kInvalidArgument);
  }
}

// One hop reaches exactly the transformation children of the base rules.
TEST(ExploreTest, OneHopIsTheChildSet) {
  std::vector<RewritePair> pairs = LoadPairs("examples/khop_pairs.json");
  RuleGraph graph;
  std::vector<int> base = InternPairs(graph, pairs);
  ExplorerConfig config;
  config.strategy = Strategy::kKHop;
  config.k = 1;
  absl::StatusOr<Exploration> e = ExploreCandidates(graph, base, config);
  ASSERT_TRUE(e.ok()) << e.status();
  std::set<std::string> got;
  for (int id : e->candidates) got.insert(graph.node(id).key);
  std::set<std::string> want;
  std::set<std::string> base_keys;
  for (int b : base) base_keys.insert(graph.node(b).key);
  for (const RewritePair& p : pairs) {
    for (TransformKind kind : kTransformKinds) {
      for (const varsql::Rule& child : ApplyTransform(PairAsRule(p), kind)) {
        if (!base_keys.count(RuleKey(child))) want.insert(RuleKey(child));
      }
    }
  }
  EXPECT_EQ(got, want);
  EXPECT_FALSE(want.empty());
}

TEST(ExploreTest, PromisingWithPoolAtBaseSizeKeepsBase) {
  std::vector<RewritePair> pairs = LoadPairs("examples/khop_pairs.json");
  RuleGraph graph;
  std::vector<int> base = InternPairs(graph, pairs);
  ExplorerConfig config;
  config.strategy = Strategy::kPromising;
  config.m = static_cast<int>(base.size());
  absl::StatusOr<Exploration> e = ExploreCandidates(graph, base, config);
  ASSERT_TRUE(e.ok());
  EXPECT_EQ(std::set<int>(e->candidates.begin(), e->candidates.end()),
            std::set<int>(base.begin(), base.end()));
}

TEST(ExploreTest, BruteForceGuard) {
  std::vector<RewritePair> pairs = {
      *MakePair(::qb::testing::kSelfJoinQuery,
                ::qb::testing::kSelfJoinExpected)};
  RuleGraph graph;
  std::vector<int> base = InternPairs(graph, pairs);
  ExplorerConfig config;
  config.strategy = Strategy::kBruteForce;
  config.explosion_guard = 50;
  absl::StatusOr<Exploration> e = ExploreCandidates(graph, base, config);
  ASSERT_FALSE(e.ok());
  EXPECT_EQ(KindOf(e.status()), ErrorKind::kExplosionGuard);
}

TEST(PromisingnessTest, ZeroDistanceCountsAsOne) {
  const std::string text =
      "STRPOS(LOWER(<x>), '<y>') > 0 --> <x> ILIKE '%<y>%'";
  Rational l = Oracle(text);
  EXPECT_EQ(l, Rational(32) / 3);
  EXPECT_EQ(Promisingness(R(text), {R(text)}), l + 1 / l);
}

TEST(PromisingnessTest, UnreachableBaseAddsNothing) {
  Rational p = Promisingness(
      R("<x> + 0 --> <x>"),
      {R("STRPOS(LOWER(<x>), '<y>') > 0 --> <x> ILIKE '%<y>%'")});
  EXPECT_EQ(p, 1 / Oracle("<x> + 0 --> <x>"));
}

TEST(PromisingnessTest, ShorterCandidateScoresHigher) {
  // Both need one step (variablizing a) to cover the base rule.
  const std::string base = "<x> IN (7) --> <x> = 7";
  const std::string concrete = "a IN (7) --> a = 7";
  const std::string general = "a IN (<v>) --> a = <v>";
  ASSERT_EQ(Distance(R(concrete), R(base)), 1);
  ASSERT_EQ(Distance(R(general), R(base)), 1);
  Rational lr = Oracle(base);
  Rational pc = Promisingness(R(concrete), {R(base)});
  Rational pg = Promisingness(R(general), {R(base)});
  EXPECT_EQ(pc, lr + 1 / Oracle(concrete));
  EXPECT_EQ(pg, lr + 1 / Oracle(general));
  EXPECT_GT(pc, pg);
}

SuggestOptions Options(const std::string& strategy) {
  SuggestOptions options;
  options.explorer = *ParseStrategy(strategy);
  return options;
}

TEST(SuggestTest, HopLimitDecidesSharing) {
  std::vector<RewritePair> pairs = LoadPairs("examples/khop_pairs.json");
  absl::StatusOr<SuggestReport> one = SuggestRules(pairs, Options("khn:1"));
  ASSERT_TRUE(one.ok()) << one.status();
  EXPECT_EQ(one->rules.size(), 2u);
  EXPECT_EQ(one->stats.total_dl_after, Rational(20));
  absl::StatusOr<SuggestReport> two = SuggestRules(pairs, Options("khn:2"));
  ASSERT_TRUE(two.ok()) << two.status();
  ASSERT_EQ(two->rules.size(), 1u);
  std::string text = varsql::SerializeRule(two->rules[0].rule);
  EXPECT_EQ(two->rules[0].dl, Oracle(text)) << text;
  EXPECT_EQ(two->stats.total_dl_after, Rational(41) / 4);
  EXPECT_EQ(two->stats.total_dl_before, Rational(20));
  EXPECT_TRUE(RuleSetCovers({two->rules[0].rule}, pairs));
  EXPECT_EQ(two->rules[0].covered_examples, (std::vector<size_t>{0, 1}));
}

TEST(SuggestTest, StrposExampleAllStrategies) {
  std::vector<RewritePair> pairs = {*MakePair(
      ::qb::testing::kStrposOriginal, ::qb::testing::kStrposRewritten)};
  for (const char* s : {"bf", "khn:6", "mpn"}) {
    absl::StatusOr<SuggestReport> r = SuggestRules(pairs, Options(s));
    ASSERT_TRUE(r.ok()) << s << ": " << r.status();
    ASSERT_EQ(r->rules.size(), 1u) << s;
    EXPECT_EQ(varsql::SerializeRule(r->rules[0].rule),
              "STRPOS(LOWER(<v1>), '<v2>') > 0 --> <v1> ILIKE '%<v2>%'")
        << s;
    EXPECT_TRUE(RuleSetCovers({r->rules[0].rule}, pairs));
  }
}

TEST(SuggestTest, PoolOfOneReturnsTheExample) {
  std::vector<RewritePair> pairs = {*MakePair(
      ::qb::testing::kStrposOriginal, ::qb::testing::kStrposRewritten)};
  absl::StatusOr<SuggestReport> r = SuggestRules(pairs, Options("mpn:1"));
  ASSERT_TRUE(r.ok()) << r.status();
  ASSERT_EQ(r->rules.size(), 1u);
  EXPECT_EQ(RuleKey(r->rules[0].rule), RuleKey(PairAsRule(pairs[0])));
  EXPECT_EQ(r->rules[0].dl, Rational(10));
}

TEST(SuggestTest, Deterministic) {
  std::vector<RewritePair> pairs =
      LoadPairs("fixtures/explorer_mixed.json");
  absl::StatusOr<SuggestReport> a = SuggestRules(pairs, Options("mpn:50"));
  absl::StatusOr<SuggestReport> b = SuggestRules(pairs, Options("mpn:50"));
  ASSERT_TRUE(a.ok() && b.ok());
  nlohmann::json ja = ReportToJson(*a);
  nlohmann::json jb = ReportToJson(*b);
  ja["stats"].erase("wall_time_ms");
  jb["stats"].erase("wall_time_ms");
  EXPECT_EQ(ja, jb);
  EXPECT_TRUE(RuleSetCovers(
      [&] {
        std::vector<varsql::Rule> rules;
        for (const SuggestedRule& s : a->rules) rules.push_back(s.rule);
        return rules;
      }(),
      pairs));
}

TEST(SuggestTest, ReportJson) {
  std::vector<RewritePair> pairs = {*MakePair(
      ::qb::testing::kStrposOriginal, ::qb::testing::kStrposRewritten)};
  absl::StatusOr<SuggestReport> r = SuggestRules(pairs, Options("khn:6"));
  ASSERT_TRUE(r.ok());
  nlohmann::json j = ReportToJson(*r);
  ASSERT_EQ(j["rules"].size(), 1u);
  EXPECT_EQ(j["rules"][0]["dl_exact"], "32/3");
  EXPECT_EQ(j["rules"][0]["covered_examples"], nlohmann::json({0}));
  for (const char* key :
       {"candidates_explored", "iterations", "total_dl_before",
        "total_dl_after", "wall_time_ms"}) {
    EXPECT_TRUE(j["stats"].contains(key)) << key;
  }
  EXPECT_EQ(j["stats"]["total_dl_before_exact"], "10");
  EXPECT_GT(j["stats"]["candidates_explored"].get<int64_t>(), 1);
}

TEST(SuggestTest, BudgetExceededKeepsPartialStats) {
  std::vector<RewritePair> pairs =
      LoadPairs("fixtures/explorer_twitter.json");
  SuggestOptions options = Options("bf");
  options.budget = std::chrono::milliseconds(0);
  SuggestStats partial;
  absl::StatusOr<SuggestReport> r = SuggestRules(pairs, options, &partial);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(KindOf(r.status()), ErrorKind::kBudgetExceeded);
  EXPECT_EQ(partial.total_dl_before, Rational(10 * pairs.size()));
}

TEST(SuggestTest, ExampleErrors) {
  absl::StatusOr<std::vector<RewritePair>> none = ParseExamplesText("[]");
  ASSERT_TRUE(none.ok());
  absl::StatusOr<SuggestReport> empty = SuggestRules(*none);
  ASSERT_FALSE(empty.ok());
  EXPECT_EQ(KindOf(empty.status()), ErrorKind::kInvalidArgument);
  absl::StatusOr<std::vector<RewritePair>> bad = ParseExamplesText(
      R"([{"original": "SELECT 1", "rewritten": "SELEC 2"}])");
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(KindOf(bad.status()), ErrorKind::kParseError);
  EXPECT_NE(std::string(bad.status().message()).find("rewritten"),
            std::string::npos);
  EXPECT_GE(PositionOf(bad.status()), 0);
  absl::StatusOr<std::vector<RewritePair>> same = ParseExamplesText(
      R"([{"original": "SELECT 1", "rewritten": "SELECT 1"}])");
  ASSERT_FALSE(same.ok());
  EXPECT_EQ(KindOf(same.status()), ErrorKind::kInvalidArgument);
}

}  // namespace
}  // namespace qb::suggest
