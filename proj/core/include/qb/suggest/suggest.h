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

#ifndef QB_SUGGEST_SUGGEST_H_
#define QB_SUGGEST_SUGGEST_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "qb/suggest/cost.h"
#include "qb/suggest/coverage.h"
#include "qb/suggest/explore.h"
#include "qb/suggest/mdl.h"
#include "qb/varsql/rule.h"

namespace qb::suggest {

struct SuggestOptions {
  ExplorerConfig explorer;
  MdlConfig mdl;
  CostConfig cost;
  std::optional<std::chrono::milliseconds> budget;
  // With a single example no candidate shortens the rule set, so the greedy
  // loop would return the example itself. When set, the most general
  // explored rule that still rewrites the example exactly is returned
  // instead.
  bool generalize_single_pair = true;
};

struct SuggestStats {
  int64_t candidates_explored = 0;
  int iterations = 0;
  Rational total_dl_before = 0;
  Rational total_dl_after = 0;
  int64_t wall_time_ms = 0;
};

struct SuggestedRule {
  varsql::Rule rule;
  Rational dl;
  std::vector<size_t> covered_examples;
};

struct SuggestReport {
  std::vector<SuggestedRule> rules;
  SuggestStats stats;
};

// Greedy search for a short rule set covering the examples. When the budget
// runs out the error is BudgetExceeded and `partial`, if given, receives the
// stats gathered so far.
absl::StatusOr<SuggestReport> SuggestRules(
    const std::vector<RewritePair>& pairs, const SuggestOptions& options = {},
    SuggestStats* partial = nullptr);

// Just the rules.
absl::StatusOr<std::vector<varsql::Rule>> SuggestRules(
    const std::vector<RewritePair>& pairs, const ExplorerConfig& explorer,
    const MdlConfig& mdl, const CostConfig& cost);

// [{"original": sql, "rewritten": sql}, ...]
absl::StatusOr<std::vector<RewritePair>> ParseExamples(
    const nlohmann::json& json, sql::Dialect dialect = sql::Dialect::kGeneric);
absl::StatusOr<std::vector<RewritePair>> ParseExamplesText(
    std::string_view text, sql::Dialect dialect = sql::Dialect::kGeneric);

nlohmann::json StatsToJson(const SuggestStats& stats);
nlohmann::json ReportToJson(const SuggestReport& report);

}  // namespace qb::suggest

#endif  // QB_SUGGEST_SUGGEST_H_
