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

#include "qb/suggest/distance.h"

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qb/suggest/coverage.h"
#include "qb/suggest/transform.h"

namespace qb::suggest {
namespace {

using sql::NodeKind;
using sql::NodePtr;
using varsql::Rule;

struct Ops {
  std::set<std::string> leaves;
  std::vector<NodePtr> subtrees;
  std::vector<std::pair<sql::Path, std::vector<size_t>>> merges;

  int Cost() const {
    return static_cast<int>(leaves.size() + subtrees.size() + merges.size());
  }
  void Add(const Ops& other) {
    leaves.insert(other.leaves.begin(), other.leaves.end());
    for (const NodePtr& s : other.subtrees) {
      bool dup = false;
      for (const NodePtr& t : subtrees) dup = dup || sql::Equal(s, t);
      if (!dup) subtrees.push_back(s);
    }
    merges.insert(merges.end(), other.merges.begin(), other.merges.end());
  }
};

bool IsStringLiteral(const NodePtr& n) {
  return n->kind() == NodeKind::kLiteral &&
         n->literal() == sql::LiteralType::kString;
}

class Aligner {
 public:
  explicit Aligner(const Rule& c) : c_(c) {}

  // Turns the candidate node into an element variable.
  bool ToVariable(const NodePtr& c, LeafRole role, Ops* ops) const {
    if (c->kind() == NodeKind::kVarElem) return true;
    if (c->kind() == NodeKind::kVarSet) return false;
    std::string key = LeafKey(c_, c, role);
    if (!key.empty()) {
      ops->leaves.insert(key);
      return true;
    }
    if (!IsSubtreeKind(c)) return false;
    std::set<std::string> inner = LeafClasses(c_, c);
    ops->leaves.insert(inner.begin(), inner.end());
    Ops one;
    one.subtrees.push_back(c);
    ops->Add(one);
    return true;
  }

  bool Align(const NodePtr& c, const NodePtr& t, LeafRole role,
             const sql::Path& path, Ops* ops) const {
    if (sql::IsVariable(c)) return true;
    if (sql::Equal(c, t)) return true;
    if (t->kind() == NodeKind::kVarElem) return ToVariable(c, role, ops);
    // A string template decides by itself whether it matches.
    if (c->kind() == NodeKind::kStringTemplate &&
        (IsStringLiteral(t) || t->kind() == NodeKind::kStringTemplate)) {
      return true;
    }
    if (t->kind() == NodeKind::kStringTemplate && IsStringLiteral(c)) {
      return ToVariable(c, role, ops);
    }
    Ops structural;
    if (!LeafKey(c_, c, role).empty() || !sql::HeaderEqual(c, t) ||
        !Children(c, t, path, &structural)) {
      // Generalize the whole mismatching part.
      return ToVariable(c, role, ops);
    }
    ops->Add(structural);
    return true;
  }

 private:
  bool Children(const NodePtr& c, const NodePtr& t, const sql::Path& path,
                Ops* ops) const {
    if (c->kind() == NodeKind::kColumnRef) {
      if (c->size() != t->size()) return false;
      for (size_t i = 0; i < c->size(); ++i) {
        LeafRole r = i + 1 == c->size() ? LeafRole::kPart
                                        : LeafRole::kQualifier;
        if (!Align(c->child(i), t->child(i), r, Child(path, i), ops)) {
          return false;
        }
      }
      return true;
    }
    if (c->kind() == NodeKind::kSelect) return Clauses(c, t, path, ops);
    if (sql::IsCommutative(c)) return Unordered(c, t, path, ops);
    return Ordered(c, t, path, ops);
  }

  static sql::Path Child(const sql::Path& path, size_t i) {
    sql::Path p = path;
    p.push_back(i);
    return p;
  }

  bool Clauses(const NodePtr& c, const NodePtr& t, const sql::Path& path,
               Ops* ops) const {
    for (size_t j = 0; j < t->size(); ++j) {
      const NodePtr& tc = t->child(j);
      bool found = false;
      for (size_t i = 0; i < c->size(); ++i) {
        if (c->child(i)->kind() != tc->kind()) continue;
        found = true;
        if (!Align(c->child(i), tc, LeafRole::kNone, Child(path, i), ops)) {
          return false;
        }
      }
      if (!found) {
        for (const NodePtr& k : tc->children()) {
          if (k->kind() != NodeKind::kVarSet) return false;
        }
      }
    }
    for (const NodePtr& cc : c->children()) {
      if (!sql::FindClause(t, cc->kind())) return false;
    }
    return true;
  }

  // Items c[positions] go into one set variable of the target.
  bool Absorb(const NodePtr& c, const std::vector<size_t>& positions,
              const sql::Path& path, Ops* ops) const {
    if (positions.empty()) return true;
    if (positions.size() == 1 &&
        c->child(positions[0])->kind() == NodeKind::kVarSet) {
      return true;
    }
    for (size_t i : positions) {
      if (!ToVariable(c->child(i), LeafRole::kNone, ops)) return false;
    }
    ops->merges.emplace_back(path, positions);
    return true;
  }

  bool Ordered(const NodePtr& c, const NodePtr& t, const sql::Path& path,
               Ops* ops) const {
    size_t n = c->size();
    size_t m = t->size();
    // best[i][j]: cheapest alignment of c[0, i) with t[0, j).
    std::vector<std::vector<std::optional<Ops>>> best(
        n + 1, std::vector<std::optional<Ops>>(m + 1));
    best[0][0] = Ops{};
    auto offer = [](std::optional<Ops>& slot, Ops&& value) {
      if (!slot || value.Cost() < slot->Cost()) slot = std::move(value);
    };
    for (size_t j = 0; j < m; ++j) {
      const NodePtr& tj = t->child(j);
      for (size_t i = 0; i <= n; ++i) {
        if (!best[i][j]) continue;
        if (tj->kind() == NodeKind::kVarSet) {
          for (size_t k = i; k <= n; ++k) {
            std::vector<size_t> run;
            for (size_t x = i; x < k; ++x) run.push_back(x);
            Ops next = *best[i][j];
            if (Absorb(c, run, path, &next)) offer(best[k][j + 1], std::move(next));
          }
        } else if (i < n) {
          Ops next = *best[i][j];
          if (Align(c->child(i), tj, LeafRole::kNone, Child(path, i), &next)) {
            offer(best[i + 1][j + 1], std::move(next));
          }
        }
      }
    }
    if (!best[n][m]) return false;
    ops->Add(*best[n][m]);
    return true;
  }

  bool Unordered(const NodePtr& c, const NodePtr& t, const sql::Path& path,
                 Ops* ops) const {
    std::vector<bool> used(c->size(), false);
    bool has_set = false;
    for (const NodePtr& tj : t->children()) {
      if (tj->kind() == NodeKind::kVarSet) {
        has_set = true;
        continue;
      }
      std::optional<Ops> pick;
      size_t pick_at = 0;
      for (size_t i = 0; i < c->size(); ++i) {
        if (used[i]) continue;
        Ops trial;
        if (!Align(c->child(i), tj, LeafRole::kNone, Child(path, i), &trial)) {
          continue;
        }
        if (!pick || trial.Cost() < pick->Cost()) {
          pick = std::move(trial);
          pick_at = i;
        }
      }
      if (!pick) return false;
      used[pick_at] = true;
      ops->Add(*pick);
    }
    std::vector<size_t> rest;
    for (size_t i = 0; i < c->size(); ++i) {
      if (!used[i]) rest.push_back(i);
    }
    if (rest.empty()) return true;
    if (!has_set) return false;
    return Absorb(c, rest, path, ops);
  }

  const Rule& c_;
};

// Applies the recorded operations to `c` and checks the result.
std::optional<int> Finish(const Rule& c, const Ops& ops, const Rule& target) {
  Rule rule = c;
  for (const NodePtr& s : ops.subtrees) {
    rule = VariablizeSubtree(rule, s, FreshVariable(rule));
  }
  for (const std::string& key : ops.leaves) {
    rule = VariablizeLeafClass(rule, key, FreshVariable(rule));
  }
  auto merges = ops.merges;
  std::sort(merges.begin(), merges.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [path, positions] : merges) {
    std::optional<Rule> next =
        MergeAt(rule, path, positions, FreshVariable(rule));
    if (!next) return std::nullopt;
    rule = std::move(*next);
  }
  if (!Covers(rule, target)) return std::nullopt;
  return ops.Cost();
}

std::optional<int> AlignRules(const Rule& c, const NodePtr& target_root,
                              const Rule& target) {
  Aligner aligner(c);
  Ops ops;
  if (!aligner.Align(c.pattern.root, target_root, LeafRole::kNone, {},
                     &ops)) {
    return std::nullopt;
  }
  return Finish(c, ops, target);
}

}  // namespace

std::optional<int> Distance(const Rule& candidate, const Rule& target) {
  Rule c = candidate;
  int pre = 0;
  const NodePtr& t = target.pattern.root;
  bool c_stmt = c.pattern.root->kind() == NodeKind::kSelect;
  bool t_stmt = t->kind() == NodeKind::kSelect;
  if (c_stmt && t_stmt) {
    // Clauses the target lacks are dropped first.
    for (const NodePtr& clause : candidate.pattern.root->children()) {
      if (sql::FindClause(t, clause->kind())) continue;
      std::optional<Rule> next = DropClause(c, clause->kind());
      if (!next) return std::nullopt;
      c = std::move(*next);
      ++pre;
    }
  } else if (c_stmt && !t_stmt) {
    for (const NodePtr& clause : candidate.pattern.root->children()) {
      if (clause->kind() == NodeKind::kWhere ||
          clause->kind() == NodeKind::kHaving) {
        continue;
      }
      std::optional<Rule> next = DropClause(c, clause->kind());
      if (!next) return std::nullopt;
      c = std::move(*next);
      ++pre;
    }
    std::optional<Rule> lifted = LiftPredicate(c);
    if (!lifted) return std::nullopt;
    c = std::move(*lifted);
    ++pre;
  } else if (!c_stmt && t_stmt) {
    // A predicate-level candidate may match any site inside the target.
    std::optional<int> best;
    sql::VisitPreorder(t, [&](const NodePtr& site, const sql::Path&) {
      if (site->kind() != c.pattern.root->kind()) return true;
      std::optional<int> d = AlignRules(c, site, target);
      if (d && (!best || *d < *best)) best = d;
      return true;
    });
    return best;
  }
  std::optional<int> d = AlignRules(c, t, target);
  if (!d) return std::nullopt;
  return pre + *d;
}

}  // namespace qb::suggest
