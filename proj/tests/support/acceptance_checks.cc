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

#include "acceptance_checks.h"

#include <chrono>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "contract.h"
#include "generators.h"
#include "mdl_oracle.h"
#include "qb/rewrite/engine.h"
#include "qb/sql/parser.h"
#include "qb/sql/schema.h"
#include "qb/sql/serializer.h"
#include "qb/suggest/distance.h"
#include "qb/suggest/mdl.h"
#include "qb/suggest/suggest.h"
#include "qb/suggest/transform.h"

namespace qb::testing {
namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string Collapse(const std::string& text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

absl::StatusOr<varsql::Rule> RuleNamed(const std::vector<varsql::Rule>& rules,
                                       const std::string& name) {
  for (const varsql::Rule& r : rules) {
    if (r.name == name) return r;
  }
  return absl::NotFoundError("no rule " + name);
}

std::set<std::string> Keys(const suggest::SuggestReport& report) {
  std::set<std::string> keys;
  for (const suggest::SuggestedRule& r : report.rules) {
    keys.insert(suggest::RuleKey(r.rule));
  }
  return keys;
}

absl::StatusOr<suggest::SuggestReport> RunStrategy(
    const std::vector<suggest::RewritePair>& pairs, const std::string& spec) {
  absl::StatusOr<suggest::ExplorerConfig> explorer =
      suggest::ParseStrategy(spec);
  if (!explorer.ok()) return explorer.status();
  suggest::SuggestOptions options;
  options.explorer = *explorer;
  return suggest::SuggestRules(pairs, options);
}

// Equal up to a consistent renaming of variables.
bool SameUpToRenaming(const varsql::Rule& a, const varsql::Rule& b) {
  varsql::Rule ca = suggest::CanonicalizeVariables(a);
  varsql::Rule cb = suggest::CanonicalizeVariables(b);
  return sql::Equal(ca.pattern.root, cb.pattern.root) &&
         sql::Equal(ca.replacement.root, cb.replacement.root);
}

}  // namespace

const char kStrposOriginal[] =
    "SELECT SUM(1) AS \"cnt:tweets\", \"state_name\" AS \"state_name\" "
    "FROM \"tweets\" WHERE STRPOS(LOWER(\"content\"), 'covid') > 0 "
    "GROUP BY 2";
const char kStrposRewritten[] =
    "SELECT SUM(1) AS \"cnt:tweets\", \"state_name\" AS \"state_name\" "
    "FROM \"tweets\" WHERE \"content\" ILIKE '%covid%' GROUP BY 2";
const char kSelfJoinQuery[] =
    "SELECT e1.name, e1.age, e2.salary FROM employee e1, employee e2 "
    "WHERE e1.id = e2.id AND e1.age > 17 AND e2.salary > 35000";
const char kSelfJoinExpected[] =
    "SELECT e1.name, e1.age, e1.salary FROM employee e1 "
    "WHERE e1.age > 17 AND e1.salary > 35000";
const char kDistanceCandidate[] =
    "SELECT <<s>> FROM tweets WHERE STRPOS(LOWER(CAST(msg AS TEXT)), "
    "'iphone') > 0 --> SELECT <<s>> FROM tweets WHERE CAST(msg AS TEXT) "
    "ILIKE '%iphone%'";
const char kDistanceTarget[] =
    "SELECT <<s>> FROM <t> WHERE STRPOS(LOWER(<x>), '<y>') > 0 --> "
    "SELECT <<s>> FROM <t> WHERE <x> ILIKE '%<y>%'";

std::string DataPath(const std::string& relative) {
  return std::string(QB_DATA_DIR) + "/" + relative;
}

std::string TestsPath(const std::string& relative) {
  return std::string(QB_TESTS_DIR) + "/" + relative;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<suggest::RewritePair> LoadPairs(const std::string& relative) {
  absl::StatusOr<std::vector<suggest::RewritePair>> pairs =
      suggest::ParseExamplesText(ReadFile(DataPath(relative)));
  return pairs.ok() ? *pairs : std::vector<suggest::RewritePair>{};
}

const std::vector<std::string>& MdlOracleRules() {
  static const std::vector<std::string> kRules = {
      "STRPOS(LOWER(<x>), '<y>') > 0 --> <x> ILIKE '%<y>%'",
      "<x> = TIMESTAMP(<y>) --> <x> = <y>",
      "<x> + 0 --> <x>",
      "<x> IN (<y>) --> <x> = <y>",
      "SELECT <<s>> FROM <t> WHERE <<p>> --> SELECT <<s>> FROM <t> WHERE "
      "<<p>> AND TRUE",
      "SELECT <<s>> FROM tweets WHERE STRPOS(LOWER(<x>), '<y>') > 0 --> "
      "SELECT <<s>> FROM tweets WHERE <x> ILIKE '%<y>%'",
      "CAST(<x> AS TEXT) = '<y>' --> <x> = '<y>'",
      "<a> > 0 --> TRUE",
      "SELECT * FROM t WHERE a = 1 --> SELECT * FROM t WHERE a = 2",
      "COUNT(DISTINCT <x>) --> COUNT(<x>)",
      "<x> LIKE '%<y>%' --> STRPOS(<x>, '<y>') > 0",
      "SELECT <<s>> FROM <t1>, <t2> WHERE <t1>.<a1> = <t2>.<a2> AND <<p>> "
      "--> SELECT <<s>> FROM <t1> WHERE <<p>>",
      "<x> BETWEEN <a> AND <b> --> <x> >= <a> AND <x> <= <b>",
      "NOT <x> = <y> --> <x> <> <y>",
      "COALESCE(<x>, <x>) --> <x>",
      "<x> * 1 --> <x>",
      "SELECT DISTINCT <<s>> FROM <t> --> SELECT <<s>> FROM <t>",
      "LOWER(LOWER(<x>)) --> LOWER(<x>)",
      "<x> = '' --> <x> IS NULL",
      "SELECT <<s>> FROM <t> ORDER BY <<o>> LIMIT 10 --> SELECT <<s>> FROM "
      "<t> ORDER BY <<o>> LIMIT 5",
      "<x> || '' --> <x>",
      "SUM(1) --> COUNT(*)",
      "<x> ILIKE '<y>%' --> LOWER(<x>) LIKE '<y>%'",
      "<t>.<c> >= 100.5 --> <t>.<c> > 100",
      "CASE WHEN <c> THEN 1 ELSE 0 END = 1 --> <c>",
  };
  return kRules;
}

const std::vector<std::string>& ExplorerFixtures() {
  static const std::vector<std::string> kFixtures = {
      "fixtures/explorer_twitter.json", "fixtures/explorer_in_list.json",
      "fixtures/explorer_mixed.json"};
  return kFixtures;
}

CheckResult CheckStrposGolden() {
  absl::StatusOr<std::vector<varsql::Rule>> rules =
      varsql::LoadRuleFile(DataPath("rules/bundled_rules.json"));
  if (!rules.ok()) return {false, std::string(rules.status().message())};
  absl::StatusOr<varsql::Rule> rule = RuleNamed(*rules, "strpos_to_ilike");
  if (!rule.ok()) return {false, "STRPOS rule missing from rule file"};
  auto start = Clock::now();
  absl::StatusOr<sql::NodePtr> query = sql::ParseQuery(kStrposOriginal);
  if (!query.ok()) return {false, std::string(query.status().message())};
  rewrite::RewriteResult result = rewrite::Rewrite(*query, {*rule}, nullptr);
  std::string out = sql::Serialize(result.query);
  double ms = MillisSince(start);
  std::string expected =
      sql::Serialize(*sql::ParseQuery(kStrposRewritten));
  bool same = Collapse(out) == Collapse(expected) &&
              Collapse(out) == Collapse(kStrposRewritten);
  std::ostringstream detail;
  detail << (same ? "output matches the ILIKE query" : "got: " + out) << " in "
         << ms << " ms";
  return {same && ms < 100, detail.str()};
}

CheckResult CheckSelfJoin() {
  absl::StatusOr<std::vector<varsql::Rule>> rules =
      varsql::LoadRuleFile(DataPath("rules/bundled_rules.json"));
  if (!rules.ok()) return {false, std::string(rules.status().message())};
  absl::StatusOr<varsql::Rule> rule = RuleNamed(*rules, "remove_self_join");
  if (!rule.ok()) return {false, "self-join rule missing from rule file"};
  absl::StatusOr<sql::SchemaCatalog> unique =
      sql::SchemaCatalog::FromFile(DataPath("schemas/employee.json"));
  absl::StatusOr<sql::SchemaCatalog> plain = sql::SchemaCatalog::FromFile(
      DataPath("schemas/employee_nonunique.json"));
  if (!unique.ok() || !plain.ok()) return {false, "cannot load schemas"};
  sql::NodePtr query = *sql::ParseQuery(kSelfJoinQuery);
  sql::NodePtr expected = *sql::ParseQuery(kSelfJoinExpected);
  rewrite::RewriteResult with_key = rewrite::Rewrite(query, {*rule}, &*unique);
  rewrite::RewriteResult without = rewrite::Rewrite(query, {*rule}, &*plain);
  bool removed = sql::Equal(with_key.query, expected) &&
                 Collapse(sql::Serialize(with_key.query)) ==
                     Collapse(kSelfJoinExpected);
  bool passthrough = sql::Equal(without.query, query) &&
                     without.trace.steps.empty();
  std::string detail = removed ? "join removed with primary key"
                               : "got: " + sql::Serialize(with_key.query);
  detail += passthrough ? "; passthrough without uniqueness"
                        : "; non-unique got: " + sql::Serialize(without.query);
  return {removed && passthrough, detail};
}

CheckResult CheckSuggestReproduction() {
  std::vector<suggest::RewritePair> pairs = LoadPairs("examples/strpos_pair.json");
  if (pairs.size() != 1) return {false, "cannot load the STRPOS pair"};
  varsql::Rule expected =
      *varsql::ParseRule("STRPOS(LOWER(<x>), '<y>') > 0 --> <x> ILIKE '%<y>%'");
  std::string detail;
  bool all = true;
  for (const char* strategy : {"bf", "khn:6", "mpn"}) {
    auto start = Clock::now();
    absl::StatusOr<suggest::SuggestReport> report = RunStrategy(pairs, strategy);
    double ms = MillisSince(start);
    bool found = false;
    if (report.ok()) {
      for (const suggest::SuggestedRule& r : report->rules) {
        found = found || SameUpToRenaming(r.rule, expected);
      }
    }
    bool ok = found && ms < 10000;
    all = all && ok;
    std::ostringstream part;
    part << strategy << (ok ? " ok " : " FAILED ") << static_cast<int>(ms)
         << " ms";
    if (!found && report.ok() && !report->rules.empty()) {
      part << " got " << varsql::SerializeRule(report->rules[0].rule);
    }
    detail += (detail.empty() ? "" : "; ") + part.str();
  }
  return {all, detail};
}

CheckResult CheckKHop() {
  std::vector<suggest::RewritePair> pairs = LoadPairs("examples/khop_pairs.json");
  if (pairs.size() != 2) return {false, "cannot load the k-hop fixture"};
  absl::StatusOr<suggest::SuggestReport> k1 = RunStrategy(pairs, "khn:1");
  absl::StatusOr<suggest::SuggestReport> k2 = RunStrategy(pairs, "khn:2");
  if (!k1.ok() || !k2.ok()) return {false, "suggestion failed"};
  bool seeds = k1->rules.size() == 2;
  for (size_t i = 0; seeds && i < 2; ++i) {
    seeds = SameUpToRenaming(k1->rules[i].rule, suggest::PairAsRule(pairs[i]));
  }
  bool shared = k2->rules.size() == 1 &&
                k2->rules[0].covered_examples.size() == 2;
  bool smaller = k2->stats.total_dl_after < k1->stats.total_dl_after;
  std::string detail = "k=1: " + std::to_string(k1->rules.size()) +
                       " rules, total " +
                       suggest::ToString(k1->stats.total_dl_after) +
                       "; k=2: " + std::to_string(k2->rules.size()) +
                       " rule(s), total " +
                       suggest::ToString(k2->stats.total_dl_after);
  return {seeds && shared && smaller, detail};
}

CheckResult CheckExplorerEquivalence() {
  auto start = Clock::now();
  bool all = true;
  std::string detail;
  for (const std::string& fixture : ExplorerFixtures()) {
    std::vector<suggest::RewritePair> pairs = LoadPairs(fixture);
    if (pairs.size() < 2 || pairs.size() > 5) {
      return {false, "fixture " + fixture + " must hold 2-5 pairs"};
    }
    absl::StatusOr<suggest::SuggestReport> bf = RunStrategy(pairs, "bf");
    if (!bf.ok()) return {false, std::string(bf.status().message())};
    std::set<std::string> target = Keys(*bf);
    int k_star = 0;
    int64_t khn_count = 0;
    for (int k = 1; k <= 8 && k_star == 0; ++k) {
      auto r = RunStrategy(pairs, "khn:" + std::to_string(k));
      if (r.ok() && Keys(*r) == target) {
        k_star = k;
        khn_count = r->stats.candidates_explored;
      }
    }
    int m_star = 0;
    int64_t mpn_count = 0;
    for (int m = 1; m <= 2000 && m_star == 0; ++m) {
      auto r = RunStrategy(pairs, "mpn:" + std::to_string(m));
      if (r.ok() && Keys(*r) == target) {
        m_star = m;
        mpn_count = r->stats.candidates_explored;
      }
    }
    int64_t bf_count = bf->stats.candidates_explored;
    bool ok = k_star > 0 && m_star > 0 && mpn_count < khn_count &&
              khn_count < bf_count;
    all = all && ok;
    std::ostringstream part;
    part << fixture.substr(fixture.find('/') + 1) << " mpn(m=" << m_star
         << ")=" << mpn_count << " khn(k=" << k_star << ")=" << khn_count
         << " bf=" << bf_count;
    detail += (detail.empty() ? "" : "; ") + part.str();
  }
  double seconds = MillisSince(start) / 1000;
  std::ostringstream tail;
  tail << "; " << seconds << " s";
  return {all && seconds < 60, detail + tail.str()};
}

CheckResult CheckCoveragePrecisionProperty(int sets) {
  std::mt19937 rng(20260101);
  int pair_total = 0;
  for (int i = 0; i < sets; ++i) {
    std::vector<ExamplePair> raw = MakeExampleSet(rng);
    std::vector<suggest::RewritePair> pairs;
    for (const ExamplePair& p : raw) {
      absl::StatusOr<suggest::RewritePair> pair =
          suggest::MakePair(p.original, p.rewritten);
      if (!pair.ok()) {
        return {false, "generator produced a bad pair: " + p.original};
      }
      pairs.push_back(*pair);
    }
    pair_total += static_cast<int>(pairs.size());
    absl::StatusOr<std::vector<varsql::Rule>> rules = suggest::SuggestRules(
        pairs, suggest::ExplorerConfig{}, suggest::MdlConfig{},
        suggest::CostConfig{});
    if (!rules.ok()) {
      return {false, "set " + std::to_string(i) + ": " +
                         std::string(rules.status().message())};
    }
    std::string failure = CheckCoversExactly(*rules, pairs);
    if (!failure.empty()) {
      return {false, "set " + std::to_string(i) + ": " + failure};
    }
  }
  return {true, std::to_string(sets) + " sets, " + std::to_string(pair_total) +
                    " pairs, every original rewrites to its target"};
}

CheckResult CheckTerminationProperty(int instances) {
  std::mt19937 rng(7);
  std::map<std::string, int> by_kind;
  for (int i = 0; i < instances; ++i) {
    TerminationInstance instance = MakeTerminationInstance(rng);
    std::string failure = CheckTermination(instance);
    if (!failure.empty()) {
      return {false, "instance " + std::to_string(i) + " (" + instance.query +
                         "): " + failure};
    }
    absl::StatusOr<sql::NodePtr> q = sql::ParseQuery(instance.query);
    rewrite::RewriteLimits limits;
    limits.max_steps = instance.max_steps;
    ++by_kind[rewrite::TerminationName(
        rewrite::Rewrite(*q, instance.rules, nullptr, limits)
            .trace.terminated_by)];
  }
  std::string detail = std::to_string(instances) + " instances:";
  for (const auto& [kind, count] : by_kind) {
    detail += " " + kind + "=" + std::to_string(count);
  }
  bool all_kinds = by_kind.size() == 3;
  if (!all_kinds) detail += " (not every termination kind was exercised)";
  return {all_kinds, detail};
}

CheckResult CheckMdlOracle() {
  int matched = 0;
  for (const std::string& text : MdlOracleRules()) {
    absl::StatusOr<varsql::Rule> rule = varsql::ParseRule(text);
    if (!rule.ok()) return {false, "cannot parse " + text};
    absl::StatusOr<suggest::Rational> dl = suggest::DescriptionLength(*rule);
    if (!dl.ok()) return {false, std::string(dl.status().message())};
    Fraction oracle = OracleDescriptionLength(text);
    suggest::Rational expected{oracle.num};
    expected /= oracle.den;
    if (*dl != expected) {
      return {false, text + ": library " + suggest::ToString(*dl) +
                         ", oracle " + suggest::ToString(expected)};
    }
    ++matched;
  }
  return {matched == 25, std::to_string(matched) + " rules match exactly"};
}

CheckResult CheckDistanceAnchor() {
  absl::StatusOr<varsql::Rule> c1 = varsql::ParseRule(kDistanceCandidate);
  absl::StatusOr<varsql::Rule> r1 = varsql::ParseRule(kDistanceTarget);
  if (!c1.ok() || !r1.ok()) return {false, "cannot parse the fixture"};
  std::optional<int> d = suggest::Distance(*c1, *r1);
  return {d.has_value() && *d == 4,
          "distance(c1, R1) = " + (d ? std::to_string(*d) : "inf")};
}

CheckResult CheckServiceContract() {
  ContractOutcome outcome =
      RunContractFile(TestsPath("contract/service_contract.json"));
  if (!outcome.failures.empty()) {
    return {false, std::to_string(outcome.failures.size()) + " of " +
                       std::to_string(outcome.cases) +
                       " cases failed; first: " + outcome.failures[0]};
  }
  return {outcome.cases > 0,
          std::to_string(outcome.cases) + " recorded cases pass over HTTP"};
}

const std::vector<AcceptanceCheck>& AcceptanceChecks() {
  static const std::vector<AcceptanceCheck> kChecks = {
      {"strpos-golden-rewrite", CheckStrposGolden},
      {"self-join-removal", CheckSelfJoin},
      {"suggestion-reproduction", CheckSuggestReproduction},
      {"k-hop-lookahead", CheckKHop},
      {"explorer-equivalence", CheckExplorerEquivalence},
      {"coverage-precision-property", [] { return CheckCoveragePrecisionProperty(); }},
      {"termination-property", [] { return CheckTerminationProperty(); }},
      {"mdl-oracle", CheckMdlOracle},
      {"distance-anchor", CheckDistanceAnchor},
      {"service-contract", CheckServiceContract},
  };
  return kChecks;
}

}  // namespace qb::testing
