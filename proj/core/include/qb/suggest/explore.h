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

#ifndef QB_SUGGEST_EXPLORE_H_
#define QB_SUGGEST_EXPLORE_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "qb/suggest/mdl.h"
#include "qb/suggest/transform.h"
#include "qb/varsql/rule.h"

namespace qb::suggest {

enum class Strategy { kBruteForce, kKHop, kPromising };

inline constexpr int kDefaultPromisingM = 1000;

struct ExplorerConfig {
  Strategy strategy = Strategy::kPromising;
  int k = 2;
  int m = kDefaultPromisingM;
  // BF gives up past this many rules.
  size_t explosion_guard = 50000;
};

// "bf", "khn", "khn:K", "mpn", "mpn:M". Missing parameters keep defaults.
absl::StatusOr<ExplorerConfig> ParseStrategy(std::string_view text);
std::string StrategyName(const ExplorerConfig& config);

struct CandidateRule {
  int id = 0;
  varsql::Rule rule;
  std::string key;
  int hops = 0;
  std::vector<std::pair<int, std::string>> parents;
  Rational dl;
};

using Clock = std::chrono::steady_clock;

// Vertices are rules deduplicated by key; edges are transformations. Child
// lists, coverage and distances are memoized.
class RuleGraph {
 public:
  explicit RuleGraph(MdlConfig mdl = {},
                     std::optional<Clock::time_point> deadline = std::nullopt);

  // Adds a finished rule; a known rule keeps the smaller hop count.
  absl::StatusOr<int> Intern(const varsql::Rule& rule, int hops);

  // One-hop children over all four transformations.
  absl::StatusOr<std::vector<int>> Children(int id);

  const CandidateRule& node(int id) const { return nodes_[id]; }
  size_t size() const { return nodes_.size(); }
  const MdlConfig& mdl() const { return mdl_; }

  bool Covers(int general, int specific);
  std::optional<int> Distance(int candidate, int target);

  absl::Status CheckDeadline() const;

 private:
  MdlConfig mdl_;
  std::optional<Clock::time_point> deadline_;
  std::vector<CandidateRule> nodes_;
  std::unordered_map<std::string, int> by_key_;
  std::map<int, std::vector<int>> children_;
  std::map<std::pair<int, int>, bool> covers_;
  std::map<std::pair<int, int>, std::optional<int>> distance_;
};

// P(c) = sum L(R_i) / max(D(c, R_i), 1) + 1 / L(c); an infinite distance
// adds nothing.
Rational Promisingness(RuleGraph& graph, int candidate,
                       const std::vector<int>& base);
Rational Promisingness(const varsql::Rule& candidate,
                       const std::vector<varsql::Rule>& base,
                       const MdlConfig& mdl = {});

struct Exploration {
  std::vector<int> candidates;
  // Distinct rules generated or examined, base included.
  int64_t touched = 0;
};

absl::StatusOr<Exploration> ExploreCandidates(RuleGraph& graph,
                                              const std::vector<int>& base,
                                              const ExplorerConfig& config);

}  // namespace qb::suggest

#endif  // QB_SUGGEST_EXPLORE_H_
