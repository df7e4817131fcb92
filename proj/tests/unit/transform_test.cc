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

#include <deque>
#include <set>
#include <string>
#include <vector>

#include "acceptance_checks.h"
#include "gtest/gtest.h"
#include "qb/sql/parser.h"
#include "qb/suggest/coverage.h"
#include "qb/suggest/transform.h"
#include "qb/varsql/rule.h"

namespace qb::suggest {
namespace {

varsql::Rule R(const std::string& text) {
  absl::StatusOr<varsql::Rule> r = varsql::ParseRule(text);
  EXPECT_TRUE(r.ok()) << text << ": " << r.status();
  return r.ok() ? *r : varsql::Rule{};
}

varsql::Rule Pair(const std::string& original, const std::string& rewritten) {
  absl::StatusOr<RewritePair> pair = MakePair(original, rewritten);
  EXPECT_TRUE(pair.ok()) << pair.status();
  return pair.ok() ? PairAsRule(*pair) : varsql::Rule{};
}

std::set<std::string> Texts(const std::vector<varsql::Rule>& rules) {
  std::set<std::string> out;
  for (const varsql::Rule& r : rules) out.insert(varsql::SerializeRule(r));
  return out;
}

TEST(TransformTest, LeafReplacesEveryOccurrence) {
  std::set<std::string> children = Texts(ApplyTransform(
      R("STRPOS(msg, 'covid') > 0 --> msg ILIKE '%covid%'"),
      TransformKind::kLeaf));
  EXPECT_EQ(children.count("STRPOS(<v1>, 'covid') > 0 --> <v1> ILIKE "
                           "'%covid%'"),
            1u);
  EXPECT_EQ(children.count("STRPOS(msg, '<v1>') > 0 --> msg ILIKE '%<v1>%'"),
            1u);
  for (const std::string& text : children) {
    EXPECT_EQ(text.find("STRPOS(<v1>, 'covid') > 0 --> msg"),
              std::string::npos);
  }
}

TEST(TransformTest, DropNeedsASharedClause) {
  EXPECT_TRUE(ApplyTransform(Pair("SELECT a FROM t WHERE x = 1",
                                  "SELECT b FROM u WHERE x = 2"),
                             TransformKind::kDrop)
                  .empty());
  std::set<std::string> dropped = Texts(ApplyTransform(
      Pair("SELECT a FROM t WHERE x IN (1)", "SELECT a FROM t WHERE x = 1"),
      TransformKind::kDrop));
  EXPECT_FALSE(dropped.empty());
}

TEST(TransformTest, MergeNeedsAdjacentVariables) {
  varsql::Rule concrete =
      Pair(::qb::testing::kStrposOriginal, ::qb::testing::kStrposRewritten);
  EXPECT_TRUE(ApplyTransform(concrete, TransformKind::kMerge).empty());
  std::set<std::string> merged = Texts(ApplyTransform(
      R("SELECT <a>, <b> FROM t WHERE <c> IN (1) --> "
        "SELECT <a>, <b> FROM t WHERE <c> = 1"),
      TransformKind::kMerge));
  EXPECT_EQ(merged.count("SELECT <<v1>> FROM t WHERE <v2> IN (1) --> "
                         "SELECT <<v1>> FROM t WHERE <v2> = 1"),
            1u);
}

TEST(TransformTest, SubtreeReplacesSharedComplexElements) {
  std::set<std::string> children = Texts(ApplyTransform(
      R("STRPOS(LOWER(CAST(msg AS TEXT)), 'covid') > 0 --> "
        "CAST(msg AS TEXT) ILIKE '%covid%'"),
      TransformKind::kSubtree));
  EXPECT_EQ(children,
            std::set<std::string>{
                "STRPOS(LOWER(<v1>), 'covid') > 0 --> <v1> ILIKE '%covid%'"});
}

TEST(TransformTest, CanonicalNamesFollowPreorder) {
  varsql::Rule r = CanonicalizeVariables(
      R("STRPOS(LOWER(<b>), '<a>') > 0 --> <b> ILIKE '%<a>%'"));
  EXPECT_EQ(varsql::SerializeRule(r),
            "STRPOS(LOWER(<v1>), '<v2>') > 0 --> <v1> ILIKE '%<v2>%'");
  EXPECT_EQ(RuleKey(R("<p> + 0 --> <p>")), RuleKey(R("<q> + 0 --> <q>")));
}

// Breadth-first search over all four transformations reaches the general
// STRPOS rule from the concrete example.
TEST(TransformTest, SearchReachesGeneralRule) {
  const std::string goal =
      "STRPOS(LOWER(<v1>), '<v2>') > 0 --> <v1> ILIKE '%<v2>%'";
  std::deque<std::pair<varsql::Rule, int>> frontier;
  frontier.push_back(
      {Pair(::qb::testing::kStrposOriginal, ::qb::testing::kStrposRewritten),
       0});
  std::set<std::string> seen = {RuleKey(frontier.front().first)};
  int found_at = -1;
  while (!frontier.empty() && found_at < 0) {
    auto [rule, depth] = frontier.front();
    frontier.pop_front();
    if (depth == 6) continue;
    for (TransformKind kind : kTransformKinds) {
      for (const varsql::Rule& child : ApplyTransform(rule, kind)) {
        std::string key = RuleKey(child);
        if (!seen.insert(key).second) continue;
        if (varsql::SerializeRule(child) == goal) found_at = depth + 1;
        frontier.push_back({child, depth + 1});
      }
    }
  }
  EXPECT_GT(found_at, 0);
  EXPECT_LE(found_at, 6);
}

// Every child generalizes its parent.
TEST(TransformTest, ChildrenCoverTheirParent) {
  const std::vector<varsql::Rule> seeds = {
      Pair(::qb::testing::kStrposOriginal, ::qb::testing::kStrposRewritten),
      Pair(::qb::testing::kSelfJoinQuery, ::qb::testing::kSelfJoinExpected),
      Pair("SELECT name FROM users WHERE id IN (7)",
           "SELECT name FROM users WHERE id = 7"),
      Pair("SELECT a FROM t WHERE b + 0 > 3 AND c = 1",
           "SELECT a FROM t WHERE b > 3 AND c = 1"),
  };
  int checked = 0;
  for (const varsql::Rule& seed : seeds) {
    for (TransformKind kind : kTransformKinds) {
      for (const varsql::Rule& child : ApplyTransform(seed, kind)) {
        EXPECT_TRUE(Covers(child, seed))
            << TransformName(kind) << ": " << varsql::SerializeRule(child);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 20);
}

}  // namespace
}  // namespace qb::suggest
