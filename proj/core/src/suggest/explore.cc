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

#include "qb/suggest/explore.h"

#include <deque>
#include <set>

#include "absl/strings/numbers.h"
#include "qb/status.h"
#include "qb/suggest/coverage.h"
#include "qb/suggest/distance.h"

namespace qb::suggest {

absl::StatusOr<ExplorerConfig> ParseStrategy(std::string_view text) {
  ExplorerConfig config;
  std::string_view name = text;
  std::string_view param;
  size_t colon = text.find(':');
  if (colon != std::string_view::npos) {
    name = text.substr(0, colon);
    param = text.substr(colon + 1);
  }
  int value = 0;
  if (!param.empty() &&
      (!absl::SimpleAtoi(absl::string_view(param.data(), param.size()),
                         &value) ||
       value < 1)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "bad strategy parameter: " + std::string(text));
  }
  if (name == "bf") {
    if (!param.empty()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       "bf takes no parameter");
    }
    config.strategy = Strategy::kBruteForce;
  } else if (name == "khn") {
    config.strategy = Strategy::kKHop;
    if (!param.empty()) config.k = value;
  } else if (name == "mpn" || name.empty()) {
    config.strategy = Strategy::kPromising;
    if (!param.empty()) config.m = value;
  } else {
    return MakeError(ErrorKind::kInvalidArgument,
                     "unknown strategy: " + std::string(text));
  }
  return config;
}

std::string StrategyName(const ExplorerConfig& config) {
  switch (config.strategy) {
    case Strategy::kBruteForce:
      return "bf";
    case Strategy::kKHop:
      return "khn:" + std::to_string(config.k);
    case Strategy::kPromising:
      return "mpn:" + std::to_string(config.m);
  }
  return "";
}

RuleGraph::RuleGraph(MdlConfig mdl, std::optional<Clock::time_point> deadline)
    : mdl_(std::move(mdl)), deadline_(deadline) {}

absl::Status RuleGraph::CheckDeadline() const {
  if (deadline_ && Clock::now() > *deadline_) {
    return MakeError(ErrorKind::kBudgetExceeded,
                     "suggestion ran past its time budget");
  }
  return absl::OkStatus();
}

absl::StatusOr<int> RuleGraph::Intern(const varsql::Rule& rule, int hops) {
  std::string key = RuleKey(rule);
  auto it = by_key_.find(key);
  if (it != by_key_.end()) {
    CandidateRule& known = nodes_[it->second];
    known.hops = std::min(known.hops, hops);
    return it->second;
  }
  absl::StatusOr<Rational> dl = DescriptionLength(rule, mdl_);
  if (!dl.ok()) return dl.status();
  CandidateRule node;
  node.id = static_cast<int>(nodes_.size());
  node.rule = rule;
  node.rule.id = 0;
  node.key = key;
  node.hops = hops;
  node.dl = *dl;
  by_key_.emplace(key, node.id);
  nodes_.push_back(std::move(node));
  return nodes_.back().id;
}

absl::StatusOr<std::vector<int>> RuleGraph::Children(int id) {
  auto it = children_.find(id);
  if (it != children_.end()) return it->second;
  absl::Status deadline = CheckDeadline();
  if (!deadline.ok()) return deadline;
  std::vector<int> out;
  std::set<int> seen;
  int hops = nodes_[id].hops + 1;
  // Copy: Intern may grow nodes_.
  varsql::Rule rule = nodes_[id].rule;
  for (TransformKind kind : kTransformKinds) {
    for (const varsql::Rule& child : ApplyTransform(rule, kind)) {
      absl::StatusOr<int> cid = Intern(child, hops);
      if (!cid.ok()) continue;  // Degenerate children are not candidates.
      if (*cid == id) continue;
      nodes_[*cid].parents.emplace_back(id, TransformName(kind));
      if (seen.insert(*cid).second) out.push_back(*cid);
    }
  }
  children_[id] = out;
  return out;
}

bool RuleGraph::Covers(int general, int specific) {
  auto key = std::make_pair(general, specific);
  auto it = covers_.find(key);
  if (it != covers_.end()) return it->second;
  bool value = general == specific ||
               suggest::Covers(nodes_[general].rule, nodes_[specific].rule);
  covers_[key] = value;
  return value;
}

std::optional<int> RuleGraph::Distance(int candidate, int target) {
  auto key = std::make_pair(candidate, target);
  auto it = distance_.find(key);
  if (it != distance_.end()) return it->second;
  std::optional<int> value =
      candidate == target
          ? std::optional<int>(0)
          : suggest::Distance(nodes_[candidate].rule, nodes_[target].rule);
  distance_[key] = value;
  return value;
}

namespace {

Rational Score(const Rational& own_dl,
               const std::vector<std::pair<Rational, std::optional<int>>>&
                   terms) {
  Rational p = 0;
  for (const auto& [dl, d] : terms) {
    if (!d) continue;
    p += dl / Rational(std::max(*d, 1));
  }
  return p + Rational(1) / own_dl;
}

}  // namespace

Rational Promisingness(RuleGraph& graph, int candidate,
                       const std::vector<int>& base) {
  std::vector<std::pair<Rational, std::optional<int>>> terms;
  for (int r : base) {
    terms.emplace_back(graph.node(r).dl, graph.Distance(candidate, r));
  }
  return Score(graph.node(candidate).dl, terms);
}

Rational Promisingness(const varsql::Rule& candidate,
                       const std::vector<varsql::Rule>& base,
                       const MdlConfig& mdl) {
  std::vector<std::pair<Rational, std::optional<int>>> terms;
  for (const varsql::Rule& r : base) {
    absl::StatusOr<Rational> dl = DescriptionLength(r, mdl);
    if (!dl.ok()) continue;
    terms.emplace_back(*dl, suggest::Distance(candidate, r));
  }
  absl::StatusOr<Rational> own = DescriptionLength(candidate, mdl);
  if (!own.ok()) return 0;
  return Score(*own, terms);
}

namespace {

absl::StatusOr<Exploration> ExploreHops(RuleGraph& graph,
                                        const std::vector<int>& base,
                                        std::optional<int> max_hops,
                                        size_t guard) {
  std::set<int> base_set(base.begin(), base.end());
  std::map<int, int> depth;
  std::deque<int> queue;
  for (int b : base) {
    if (depth.emplace(b, 0).second) queue.push_back(b);
  }
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    if (max_hops && depth[id] >= *max_hops) continue;
    absl::StatusOr<std::vector<int>> kids = graph.Children(id);
    if (!kids.ok()) return kids.status();
    for (int k : *kids) {
      if (depth.emplace(k, depth[id] + 1).second) {
        queue.push_back(k);
        if (depth.size() > guard) {
          return MakeError(ErrorKind::kExplosionGuard,
                           "candidate count exceeds " +
                               std::to_string(guard));
        }
      }
    }
  }
  Exploration out;
  out.touched = static_cast<int64_t>(depth.size());
  for (const auto& [id, d] : depth) {
    if (!base_set.count(id)) out.candidates.push_back(id);
  }
  return out;
}

absl::StatusOr<Exploration> ExplorePromising(RuleGraph& graph,
                                             const std::vector<int>& base,
                                             int m) {
  std::vector<int> pool;
  std::set<int> in_pool;
  for (int b : base) {
    if (in_pool.insert(b).second) pool.push_back(b);
  }
  std::set<int> expanded;
  std::map<int, Rational> score;
  while (static_cast<int>(pool.size()) < m && !pool.empty()) {
    size_t best = 0;
    for (size_t i = 0; i < pool.size(); ++i) {
      int id = pool[i];
      if (!score.count(id)) score[id] = Promisingness(graph, id, base);
      if (i == 0) continue;
      const Rational& a = score[id];
      const Rational& b = score[pool[best]];
      if (a > b || (a == b && graph.node(id).key < graph.node(pool[best]).key)) {
        best = i;
      }
    }
    int chosen = pool[best];
    absl::StatusOr<std::vector<int>> kids = graph.Children(chosen);
    if (!kids.ok()) return kids.status();
    pool.erase(pool.begin() + best);
    in_pool.erase(chosen);
    expanded.insert(chosen);
    for (int k : *kids) {
      if (!expanded.count(k) && in_pool.insert(k).second) pool.push_back(k);
    }
  }
  Exploration out;
  out.candidates = pool;
  std::set<int> touched(expanded);
  touched.insert(pool.begin(), pool.end());
  out.touched = static_cast<int64_t>(touched.size());
  return out;
}

}  // namespace

absl::StatusOr<Exploration> ExploreCandidates(RuleGraph& graph,
                                              const std::vector<int>& base,
                                              const ExplorerConfig& config) {
  switch (config.strategy) {
    case Strategy::kBruteForce:
      return ExploreHops(graph, base, std::nullopt, config.explosion_guard);
    case Strategy::kKHop:
      return ExploreHops(graph, base, config.k, SIZE_MAX);
    case Strategy::kPromising:
      return ExplorePromising(graph, base, config.m);
  }
  return MakeError(ErrorKind::kInvalidArgument, "unknown strategy");
}

}  // namespace qb::suggest
