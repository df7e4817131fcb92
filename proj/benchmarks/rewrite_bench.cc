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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "benchmark/benchmark.h"
#include "qb/rewrite/engine.h"
#include "qb/sql/parser.h"
#include "qb/sql/serializer.h"
#include "qb/varsql/rule.h"

namespace {

std::string ReadData(const std::string& relative) {
  std::ifstream in(std::string(QB_DATA_DIR) + "/" + relative);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<qb::varsql::Rule> BundledRules() {
  return *qb::varsql::LoadRuleFile(std::string(QB_DATA_DIR) +
                                   "/rules/bundled_rules.json");
}

void BM_ParseCorpus(benchmark::State& state) {
  std::vector<std::string> statements =
      qb::sql::SplitStatements(ReadData("corpus/queries.sql"));
  for (auto _ : state) {
    for (const std::string& s : statements) {
      benchmark::DoNotOptimize(qb::sql::ParseQuery(s));
    }
  }
  state.SetItemsProcessed(state.iterations() * statements.size());
}
BENCHMARK(BM_ParseCorpus);

void BM_RewriteCorpus(benchmark::State& state) {
  std::vector<qb::varsql::Rule> rules = BundledRules();
  std::vector<qb::sql::NodePtr> queries;
  for (const std::string& s :
       qb::sql::SplitStatements(ReadData("corpus/queries.sql"))) {
    absl::StatusOr<qb::sql::NodePtr> q = qb::sql::ParseQuery(s);
    if (q.ok()) queries.push_back(*q);
  }
  for (auto _ : state) {
    for (const qb::sql::NodePtr& q : queries) {
      benchmark::DoNotOptimize(qb::rewrite::Rewrite(q, rules, nullptr));
    }
  }
  state.SetItemsProcessed(state.iterations() * queries.size());
}
BENCHMARK(BM_RewriteCorpus);

// A WHERE clause with n STRPOS conjuncts, each rewritten in its own step.
void BM_RewriteConjuncts(benchmark::State& state) {
  std::vector<qb::varsql::Rule> rules = BundledRules();
  std::string sql = "SELECT * FROM t WHERE ";
  for (int i = 0; i < state.range(0); ++i) {
    if (i > 0) sql += " AND ";
    absl::StrAppend(&sql, "STRPOS(LOWER(c", i, "), 'v", i, "') > 0");
  }
  qb::sql::NodePtr query = *qb::sql::ParseQuery(sql);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qb::rewrite::Rewrite(query, rules, nullptr));
  }
}
BENCHMARK(BM_RewriteConjuncts)->Arg(1)->Arg(4)->Arg(16);

}  // namespace
