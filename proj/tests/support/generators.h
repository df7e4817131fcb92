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

// Seeded random instances for the property suites.

#ifndef QB_TESTS_SUPPORT_GENERATORS_H_
#define QB_TESTS_SUPPORT_GENERATORS_H_

#include <random>
#include <string>
#include <vector>

#include "qb/rewrite/engine.h"
#include "qb/suggest/coverage.h"
#include "qb/varsql/rule.h"

namespace qb::testing {

// Rule sources mixing reducing, cycling and growing rules.
const std::vector<std::string>& TerminationRulePool();

struct TerminationInstance {
  std::vector<varsql::Rule> rules;
  std::string query;
  int max_steps = 64;
};

TerminationInstance MakeTerminationInstance(std::mt19937& rng);

// Checks the trace invariants of one rewrite run. Returns an empty string
// when they hold, else a description of the first violation.
std::string CheckTermination(const TerminationInstance& instance);

// One of five rewrite templates instantiated with random names and values.
struct ExamplePair {
  std::string original;
  std::string rewritten;
};

inline constexpr int kTemplateCount = 5;

ExamplePair MakeTemplatePair(int template_id, std::mt19937& rng);

// 1 to 4 pairs drawn from one or two templates.
std::vector<ExamplePair> MakeExampleSet(std::mt19937& rng);

// Empty when every pair's original rewrites to exactly its target under
// `rules`, else a description of the first failure.
std::string CheckCoversExactly(const std::vector<varsql::Rule>& rules,
                               const std::vector<suggest::RewritePair>& pairs);

}  // namespace qb::testing

#endif  // QB_TESTS_SUPPORT_GENERATORS_H_
