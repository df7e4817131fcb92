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

#include "qb/suggest/transform.h"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qb/sql/parser.h"
#include "qb/suggest/mdl.h"

namespace qb::suggest {
namespace {

using sql::Node;
using sql::NodeKind;
using sql::NodePtr;
using varsql::Rule;

using VarCounts = std::map<std::string, int>;

void AddVars(const NodePtr& n, VarCounts* counts) {
  if (!n) return;
  std::vector<sql::VarOccurrence> vars;
  sql::CollectVariables(n, &vars);
  for (const auto& v : vars) ++(*counts)[v.name];
}

VarCounts RuleVars(const Rule& rule) {
  VarCounts counts;
  AddVars(rule.pattern.root, &counts);
  AddVars(rule.replacement.root, &counts);
  return counts;
}

// The variables of `parts` occur nowhere else in the rule.
bool SelfContained(const Rule& rule, const std::vector<NodePtr>& parts) {
  VarCounts inside;
  for (const NodePtr& p : parts) AddVars(p, &inside);
  VarCounts all = RuleVars(rule);
  for (const auto& [name, n] : inside) {
    if (all[name] != n) return false;
  }
  return true;
}

NodePtr MapChildren(const NodePtr& n,
                    const std::function<NodePtr(const NodePtr&)>& f) {
  if (n->size() == 0) return n;
  std::vector<NodePtr> kids;
  kids.reserve(n->size());
  for (const NodePtr& c : n->children()) kids.push_back(f(c));
  return sql::WithChildren(n, std::move(kids));
}

bool AllIdentifiers(const NodePtr& n) {
  if (n->size() == 0) return false;
  for (const NodePtr& c : n->children()) {
    if (c->kind() != NodeKind::kIdentifier) return false;
  }
  return true;
}

std::string FoldedAliasOrName(const NodePtr& table) {
  if (!table->alias().empty()) {
    return sql::FoldName(table->alias(), table->has_flag(sql::kAliasQuoted));
  }
  const NodePtr& last = table->children().back();
  return sql::FoldName(last->text(), last->has_flag(sql::kQuoted));
}

void CollectTables(const NodePtr& n, std::set<std::string>* out) {
  sql::VisitPreorder(n, [&](const NodePtr& x, const sql::Path&) {
    if (x->kind() == NodeKind::kTableRef && AllIdentifiers(x)) {
      out->insert(FoldedAliasOrName(x));
    }
    return true;
  });
}

std::string KeyWithTables(const std::set<std::string>& tables,
                          const NodePtr& n, LeafRole role) {
  switch (n->kind()) {
    case NodeKind::kIdentifier: {
      std::string f = sql::FoldName(n->text(), n->has_flag(sql::kQuoted));
      if (role == LeafRole::kQualifier) {
        return (tables.count(f) ? "T:" : "Q:") + f;
      }
      if (role == LeafRole::kPart) return "P:" + f;
      return "";
    }
    case NodeKind::kTableRef:
      if (role == LeafRole::kNone && AllIdentifiers(n)) {
        return "T:" + FoldedAliasOrName(n);
      }
      return "";
    case NodeKind::kColumnRef:
      if (n->size() == 1 && n->child(0)->kind() == NodeKind::kIdentifier) {
        const NodePtr& id = n->child(0);
        return "C:" + sql::FoldName(id->text(), id->has_flag(sql::kQuoted));
      }
      return "";
    case NodeKind::kLiteral:
      if (n->literal() == sql::LiteralType::kNumber) return "N:" + n->text();
      if (n->literal() == sql::LiteralType::kString && !n->text().empty()) {
        return "S:" + n->text();
      }
      return "";
    default:
      return "";
  }
}

using LeafVisitor =
    std::function<NodePtr(const NodePtr&, const std::string& key)>;

// Walks leaf sites; `visit` returns the node to put in place of a leaf.
NodePtr WalkLeaves(const std::set<std::string>& tables, const NodePtr& n,
                   LeafRole role, const LeafVisitor& visit) {
  std::string key = KeyWithTables(tables, n, role);
  if (!key.empty()) return visit(n, key);
  switch (n->kind()) {
    case NodeKind::kColumnRef: {
      std::vector<NodePtr> kids;
      for (size_t i = 0; i < n->size(); ++i) {
        LeafRole r = i + 1 == n->size() ? LeafRole::kPart : LeafRole::kQualifier;
        kids.push_back(WalkLeaves(tables, n->child(i), r, visit));
      }
      return sql::WithChildren(n, std::move(kids));
    }
    case NodeKind::kTableRef:
    case NodeKind::kVarElem:
    case NodeKind::kVarSet:
    case NodeKind::kStringTemplate:
      return n;
    default:
      return MapChildren(n, [&](const NodePtr& c) {
        return WalkLeaves(tables, c, LeafRole::kNone, visit);
      });
  }
}

std::set<std::string> RuleTables(const Rule& rule) {
  std::set<std::string> tables;
  CollectTables(rule.pattern.root, &tables);
  CollectTables(rule.replacement.root, &tables);
  return tables;
}

NodePtr TemplateText(std::string text) {
  return Node::Make(NodeKind::kTemplateText, std::move(text), {});
}

// Splits fixed text around `needle`, putting `var` in each gap.
void SpliceText(const std::string& text, const std::string& needle,
                const std::string& var, std::vector<NodePtr>* segs) {
  size_t pos = 0;
  while (true) {
    size_t at = text.find(needle, pos);
    if (at == std::string::npos) break;
    if (at > pos) segs->push_back(TemplateText(text.substr(pos, at - pos)));
    segs->push_back(sql::MakeVarElem(var));
    pos = at + needle.size();
  }
  if (pos < text.size()) segs->push_back(TemplateText(text.substr(pos)));
}

NodePtr SpliceStrings(const NodePtr& n, const std::string& needle,
                      const std::string& var) {
  if (n->kind() == NodeKind::kLiteral &&
      n->literal() == sql::LiteralType::kString &&
      n->text().find(needle) != std::string::npos) {
    std::vector<NodePtr> segs;
    SpliceText(n->text(), needle, var, &segs);
    return Node::Make(NodeKind::kStringTemplate, "", std::move(segs));
  }
  if (n->kind() == NodeKind::kStringTemplate) {
    std::vector<NodePtr> segs;
    for (const NodePtr& s : n->children()) {
      if (s->kind() == NodeKind::kTemplateText) {
        SpliceText(s->text(), needle, var, &segs);
      } else {
        segs.push_back(s);
      }
    }
    return sql::WithChildren(n, std::move(segs));
  }
  return MapChildren(
      n, [&](const NodePtr& c) { return SpliceStrings(c, needle, var); });
}

NodePtr RenameVars(const NodePtr& n,
                   const std::map<std::string, std::string>& names) {
  if (n->kind() == NodeKind::kVarElem || n->kind() == NodeKind::kVarSet) {
    auto it = names.find(n->text());
    if (it == names.end() || it->second == n->text()) return n;
    return n->kind() == NodeKind::kVarElem ? sql::MakeVarElem(it->second)
                                           : sql::MakeVarSet(it->second);
  }
  if (n->concrete()) return n;
  return MapChildren(n, [&](const NodePtr& c) { return RenameVars(c, names); });
}

NodePtr ReplaceEqual(const NodePtr& n, const NodePtr& target,
                     const NodePtr& with) {
  if (n->hash() == target->hash() && sql::Equal(n, target)) return with;
  if (n->tree_size() <= target->tree_size()) return n;
  return MapChildren(
      n, [&](const NodePtr& c) { return ReplaceEqual(c, target, with); });
}

bool ContainsEqual(const NodePtr& n, const NodePtr& target) {
  bool found = false;
  sql::VisitPreorder(n, [&](const NodePtr& x, const sql::Path&) {
    if (found) return false;
    if (x->hash() == target->hash() && sql::Equal(x, target)) {
      found = true;
      return false;
    }
    return x->tree_size() > target->tree_size();
  });
  return found;
}

bool IsSubtreeKindImpl(const NodePtr& n) {
  switch (n->kind()) {
    case NodeKind::kFuncCall:
    case NodeKind::kCast:
    case NodeKind::kBinaryOp:
    case NodeKind::kUnaryOp:
    case NodeKind::kBetween:
    case NodeKind::kInList:
    case NodeKind::kCase:
    case NodeKind::kSubquery:
    case NodeKind::kTypedLiteral:
    case NodeKind::kInterval:
    case NodeKind::kConjunction:
    case NodeKind::kRaw:
      return true;
    case NodeKind::kColumnRef:
      return n->size() >= 2;
    default:
      return false;
  }
}

// Lists whose items a set variable may stand for; the first `skip` children
// are not items.
bool IsSpliceableList(const NodePtr& n, size_t* skip) {
  *skip = 0;
  switch (n->kind()) {
    case NodeKind::kSelectList:
    case NodeKind::kFrom:
    case NodeKind::kGroupBy:
    case NodeKind::kFuncCall:
    case NodeKind::kConjunction:
    case NodeKind::kUsing:
      return true;
    case NodeKind::kInList:
      *skip = 1;
      return true;
    default:
      return false;
  }
}

bool IsUnordered(const NodePtr& n) {
  return n->kind() == NodeKind::kConjunction || n->kind() == NodeKind::kFrom;
}

std::optional<sql::Path> FindNode(const NodePtr& root, const Node* target) {
  std::optional<sql::Path> found;
  sql::VisitPreorder(root, [&](const NodePtr& x, const sql::Path& path) {
    if (found) return false;
    if (x.get() == target) {
      found = path;
      return false;
    }
    return true;
  });
  return found;
}

// Replaces items[first..] of `parent` that match `names` with one VarSet.
NodePtr MergeIn(const NodePtr& parent, const std::vector<size_t>& positions,
                const std::string& var) {
  std::vector<NodePtr> kids;
  std::set<size_t> drop(positions.begin(), positions.end());
  for (size_t i = 0; i < parent->size(); ++i) {
    if (i == positions.front()) {
      kids.push_back(sql::MakeVarSet(var));
    } else if (!drop.count(i)) {
      kids.push_back(parent->child(i));
    }
  }
  return sql::WithChildren(parent, std::move(kids));
}

std::vector<std::string> VarNames(const std::vector<NodePtr>& items) {
  std::vector<std::string> names;
  for (const NodePtr& n : items) names.push_back(n->text());
  return names;
}

// Finds, in the replacement, the list node holding exactly the element
// variables `names` once each; ordered lists need them as a run in order.
std::optional<std::pair<sql::Path, std::vector<size_t>>> FindRunInReplacement(
    const NodePtr& root, const std::vector<std::string>& names) {
  std::optional<std::pair<sql::Path, std::vector<size_t>>> found;
  sql::VisitPreorder(root, [&](const NodePtr& x, const sql::Path& path) {
    if (found) return false;
    size_t skip = 0;
    if (!IsSpliceableList(x, &skip)) return true;
    std::vector<size_t> positions;
    for (const std::string& name : names) {
      for (size_t i = skip; i < x->size(); ++i) {
        const NodePtr& c = x->child(i);
        if (c->kind() == NodeKind::kVarElem && c->text() == name) {
          positions.push_back(i);
          break;
        }
      }
    }
    if (positions.size() != names.size()) return true;
    if (!IsUnordered(x)) {
      for (size_t i = 1; i < positions.size(); ++i) {
        if (positions[i] != positions[i - 1] + 1) return true;
      }
    } else {
      std::sort(positions.begin(), positions.end());
    }
    found = std::make_pair(path, positions);
    return false;
  });
  return found;
}

std::optional<Rule> MergeGroup(const Rule& rule, const sql::Path& parent_path,
                               const std::vector<size_t>& positions,
                               const std::string& var) {
  NodePtr parent = sql::NodeAt(rule.pattern.root, parent_path);
  std::vector<NodePtr> items;
  for (size_t i : positions) items.push_back(parent->child(i));
  std::vector<std::string> names;
  bool all_elems = true;
  for (const NodePtr& it : items) {
    if (it->kind() != NodeKind::kVarElem) all_elems = false;
  }
  VarCounts pattern_counts;
  AddVars(rule.pattern.root, &pattern_counts);
  VarCounts replacement_counts;
  AddVars(rule.replacement.root, &replacement_counts);
  Rule out = rule;
  out.pattern.root = sql::ReplaceAt(rule.pattern.root, parent_path,
                                    MergeIn(parent, positions, var));
  if (all_elems) {
    names = VarNames(items);
    int in_replacement = 0;
    for (const std::string& name : names) {
      if (pattern_counts[name] != 1) return std::nullopt;
      in_replacement += replacement_counts[name];
    }
    if (in_replacement == 0) return out;
    for (const std::string& name : names) {
      if (replacement_counts[name] != 1) return std::nullopt;
    }
    auto run = FindRunInReplacement(rule.replacement.root, names);
    if (!run) return std::nullopt;
    NodePtr rp = sql::NodeAt(rule.replacement.root, run->first);
    out.replacement.root = sql::ReplaceAt(rule.replacement.root, run->first,
                                          MergeIn(rp, run->second, var));
    return out;
  }
  // Items that are not all variables: they must not share variables with
  // the rest of the rule, and an equal run in the replacement is merged too.
  if (!SelfContained(rule, items)) {
    VarCounts inside;
    for (const NodePtr& p : items) AddVars(p, &inside);
    for (const auto& [name, n] : inside) {
      if (pattern_counts[name] != n) return std::nullopt;
    }
  }
  std::optional<std::pair<sql::Path, std::vector<size_t>>> run;
  sql::VisitPreorder(rule.replacement.root,
                     [&](const NodePtr& x, const sql::Path& path) {
                       if (run) return false;
                       size_t skip = 0;
                       if (!IsSpliceableList(x, &skip)) return true;
                       for (size_t s = skip; s + items.size() <= x->size();
                            ++s) {
                         bool match = true;
                         for (size_t k = 0; k < items.size(); ++k) {
                           if (!sql::Equal(x->child(s + k), items[k])) {
                             match = false;
                             break;
                           }
                         }
                         if (match) {
                           std::vector<size_t> pos;
                           for (size_t k = 0; k < items.size(); ++k) {
                             pos.push_back(s + k);
                           }
                           run = std::make_pair(path, pos);
                           return false;
                         }
                       }
                       return true;
                     });
  if (run) {
    NodePtr rp = sql::NodeAt(rule.replacement.root, run->first);
    out.replacement.root = sql::ReplaceAt(rule.replacement.root, run->first,
                                          MergeIn(rp, run->second, var));
  }
  VarCounts left;
  AddVars(out.pattern.root, &left);
  VarCounts used;
  AddVars(out.replacement.root, &used);
  for (const auto& [name, n] : used) {
    if (!left.count(name)) return std::nullopt;
  }
  return out;
}

std::vector<Rule> LeafChildren(const Rule& rule) {
  std::set<std::string> tables = RuleTables(rule);
  std::vector<std::string> keys;
  std::set<std::string> seen;
  WalkLeaves(tables, rule.pattern.root, LeafRole::kNone,
             [&](const NodePtr& n, const std::string& key) {
               if (seen.insert(key).second) keys.push_back(key);
               return n;
             });
  std::vector<Rule> out;
  std::string var = FreshVariable(rule);
  for (const std::string& key : keys) {
    out.push_back(VariablizeLeafClass(rule, key, var));
  }
  return out;
}

std::vector<Rule> SubtreeChildren(const Rule& rule) {
  std::vector<NodePtr> candidates;
  sql::VisitPreorder(rule.pattern.root,
                     [&](const NodePtr& n, const sql::Path& path) {
                       if (!path.empty() && IsSubtreeKindImpl(n)) {
                         for (const NodePtr& c : candidates) {
                           if (sql::Equal(c, n)) return true;
                         }
                         candidates.push_back(n);
                       }
                       return true;
                     });
  std::vector<Rule> out;
  std::string var = FreshVariable(rule);
  for (const NodePtr& c : candidates) {
    if (!ContainsEqual(rule.replacement.root, c)) continue;
    // Variables inside may not be used outside the replaced copies.
    VarCounts inside;
    AddVars(c, &inside);
    VarCounts all = RuleVars(rule);
    Rule next = VariablizeSubtree(rule, c, var);
    VarCounts after = RuleVars(next);
    bool ok = true;
    for (const auto& [name, n] : inside) {
      if (after.count(name)) ok = false;
    }
    (void)all;
    if (ok) out.push_back(std::move(next));
  }
  return out;
}

std::vector<Rule> MergeChildren(const Rule& rule) {
  std::vector<Rule> out;
  std::string var = FreshVariable(rule);
  sql::VisitPreorder(
      rule.pattern.root, [&](const NodePtr& n, const sql::Path& path) {
        size_t skip = 0;
        if (!IsSpliceableList(n, &skip)) return true;
        std::vector<std::vector<size_t>> groups;
        if (IsUnordered(n)) {
          std::vector<size_t> g;
          for (size_t i = skip; i < n->size(); ++i) {
            if (n->child(i)->kind() == NodeKind::kVarElem) g.push_back(i);
          }
          if (g.size() >= 2) groups.push_back(g);
        } else {
          std::vector<size_t> run;
          for (size_t i = skip; i <= n->size(); ++i) {
            if (i < n->size() && n->child(i)->kind() == NodeKind::kVarElem) {
              run.push_back(i);
              continue;
            }
            if (run.size() >= 2) groups.push_back(run);
            run.clear();
          }
        }
        for (const auto& g : groups) {
          auto merged = MergeGroup(rule, path, g, var);
          if (merged) out.push_back(std::move(*merged));
        }
        return true;
      });
  return out;
}

std::vector<Rule> DropChildren(const Rule& rule) {
  std::vector<Rule> out;
  const NodePtr& p = rule.pattern.root;
  const NodePtr& r = rule.replacement.root;
  if (p->kind() == NodeKind::kSelect && r->kind() == NodeKind::kSelect) {
    for (const NodePtr& clause : p->children()) {
      auto dropped = DropClause(rule, clause->kind());
      if (dropped) out.push_back(std::move(*dropped));
    }
    auto lifted = LiftPredicate(rule);
    if (lifted) out.push_back(std::move(*lifted));
    return out;
  }
  if (p->kind() == NodeKind::kConjunction) {
    std::vector<NodePtr> seen;
    for (const NodePtr& c : p->children()) {
      bool dup = false;
      for (const NodePtr& s : seen) dup = dup || sql::Equal(s, c);
      if (dup) continue;
      seen.push_back(c);
      auto dropped = DropConjunct(rule, c);
      if (dropped) out.push_back(std::move(*dropped));
    }
  }
  return out;
}

}  // namespace

const char* TransformName(TransformKind kind) {
  switch (kind) {
    case TransformKind::kLeaf:
      return "variablize_leaf";
    case TransformKind::kSubtree:
      return "variablize_subtree";
    case TransformKind::kMerge:
      return "merge_variables";
    case TransformKind::kDrop:
      return "drop_branch";
  }
  return "";
}

Rule RuleFromTrees(NodePtr pattern, NodePtr replacement) {
  Rule rule;
  rule.pattern = {sql::LevelOf(pattern), std::move(pattern)};
  rule.replacement = {sql::LevelOf(replacement), std::move(replacement)};
  return rule;
}

Rule CanonicalizeVariables(const Rule& rule) {
  std::vector<sql::VarOccurrence> vars;
  sql::CollectVariables(rule.pattern.root, &vars);
  sql::CollectVariables(rule.replacement.root, &vars);
  std::map<std::string, std::string> names;
  for (const auto& v : vars) {
    if (!names.count(v.name)) {
      names[v.name] = "v" + std::to_string(names.size() + 1);
    }
  }
  Rule out = rule;
  out.pattern.root = RenameVars(rule.pattern.root, names);
  out.replacement.root = RenameVars(rule.replacement.root, names);
  return out;
}

std::string RuleKey(const Rule& rule) {
  return varsql::SerializeRule(CanonicalizeVariables(rule));
}

std::optional<Rule> FinishCandidate(const Rule& input) {
  Rule rule = input;
  rule.pattern.root = sql::Normalize(rule.pattern.root);
  rule.replacement.root = sql::Normalize(rule.replacement.root);
  rule.pattern.level = sql::LevelOf(rule.pattern.root);
  rule.replacement.level = sql::LevelOf(rule.replacement.root);
  rule = CanonicalizeVariables(rule);
  NodeKind root = rule.pattern.root->kind();
  if (root == NodeKind::kVarElem || root == NodeKind::kVarSet) {
    return std::nullopt;
  }
  if (sql::Equal(rule.pattern.root, rule.replacement.root)) {
    return std::nullopt;
  }
  if (!varsql::ValidateRule(rule).ok()) return std::nullopt;
  if (CountElements(rule).c_o == 0) return std::nullopt;
  absl::StatusOr<Rule> reparsed = varsql::ParseRule(RuleKey(rule));
  if (!reparsed.ok() ||
      !sql::Equal(reparsed->pattern.root, rule.pattern.root) ||
      !sql::Equal(reparsed->replacement.root, rule.replacement.root)) {
    return std::nullopt;
  }
  return rule;
}

std::vector<Rule> ApplyTransform(const Rule& rule, TransformKind kind) {
  std::vector<Rule> raw;
  switch (kind) {
    case TransformKind::kLeaf:
      raw = LeafChildren(rule);
      break;
    case TransformKind::kSubtree:
      raw = SubtreeChildren(rule);
      break;
    case TransformKind::kMerge:
      raw = MergeChildren(rule);
      break;
    case TransformKind::kDrop:
      raw = DropChildren(rule);
      break;
  }
  std::vector<Rule> out;
  std::set<std::string> keys;
  for (const Rule& r : raw) {
    std::optional<Rule> done = FinishCandidate(r);
    if (done && keys.insert(RuleKey(*done)).second) {
      out.push_back(std::move(*done));
    }
  }
  return out;
}

std::string LeafKey(const Rule& rule, const NodePtr& node, LeafRole role) {
  return KeyWithTables(RuleTables(rule), node, role);
}

std::set<std::string> LeafClasses(const Rule& rule, const NodePtr& node) {
  std::set<std::string> tables = RuleTables(rule);
  std::set<std::string> keys;
  WalkLeaves(tables, node, LeafRole::kNone,
             [&](const NodePtr& n, const std::string& key) {
               keys.insert(key);
               return n;
             });
  return keys;
}

size_t CountLeafClasses(const Rule& rule, const NodePtr& node) {
  return LeafClasses(rule, node).size();
}

bool IsSubtreeKind(const NodePtr& node) { return IsSubtreeKindImpl(node); }

std::optional<Rule> MergeAt(const Rule& rule, const sql::Path& path,
                            const std::vector<size_t>& positions,
                            const std::string& var) {
  if (positions.empty()) return std::nullopt;
  NodePtr parent = sql::NodeAt(rule.pattern.root, path);
  if (!parent || positions.back() >= parent->size()) return std::nullopt;
  return MergeGroup(rule, path, positions, var);
}

Rule VariablizeLeafClass(const Rule& rule, const std::string& key,
                         const std::string& var) {
  std::set<std::string> tables = RuleTables(rule);
  bool is_string = key.rfind("S:", 0) == 0;
  auto visit = [&](const NodePtr& n, const std::string& k) -> NodePtr {
    if (k != key) return n;
    if (is_string) {
      return Node::Make(NodeKind::kStringTemplate, "",
                        {sql::MakeVarElem(var)});
    }
    return sql::MakeVarElem(var);
  };
  Rule out = rule;
  out.pattern.root =
      WalkLeaves(tables, rule.pattern.root, LeafRole::kNone, visit);
  out.replacement.root =
      WalkLeaves(tables, rule.replacement.root, LeafRole::kNone, visit);
  if (is_string) {
    std::string value = key.substr(2);
    out.pattern.root = SpliceStrings(out.pattern.root, value, var);
    out.replacement.root = SpliceStrings(out.replacement.root, value, var);
  }
  return out;
}

Rule VariablizeSubtree(const Rule& rule, const NodePtr& node,
                       const std::string& var) {
  NodePtr v = sql::MakeVarElem(var);
  Rule out = rule;
  out.pattern.root = ReplaceEqual(rule.pattern.root, node, v);
  out.replacement.root = ReplaceEqual(rule.replacement.root, node, v);
  return out;
}

std::optional<Rule> MergeItems(const Rule& rule,
                               const std::vector<NodePtr>& items,
                               const std::string& var) {
  if (items.empty()) return std::nullopt;
  // Locate the parent list through the first item.
  std::optional<sql::Path> first = FindNode(rule.pattern.root, items[0].get());
  if (!first || first->empty()) return std::nullopt;
  sql::Path parent_path(first->begin(), first->end() - 1);
  NodePtr parent = sql::NodeAt(rule.pattern.root, parent_path);
  std::vector<size_t> positions;
  for (const NodePtr& it : items) {
    for (size_t i = 0; i < parent->size(); ++i) {
      if (parent->child(i).get() == it.get()) {
        positions.push_back(i);
        break;
      }
    }
  }
  if (positions.size() != items.size()) return std::nullopt;
  std::sort(positions.begin(), positions.end());
  return MergeGroup(rule, parent_path, positions, var);
}

std::optional<Rule> DropClause(const Rule& rule, NodeKind clause) {
  const NodePtr& p = rule.pattern.root;
  const NodePtr& r = rule.replacement.root;
  if (p->kind() != NodeKind::kSelect || r->kind() != NodeKind::kSelect) {
    return std::nullopt;
  }
  NodePtr pc = sql::FindClause(p, clause);
  NodePtr rc = sql::FindClause(r, clause);
  if (!pc || !rc || !sql::Equal(pc, rc)) return std::nullopt;
  if (p->size() < 2 || r->size() < 2) return std::nullopt;
  if (!SelfContained(rule, {pc, rc})) return std::nullopt;
  Rule out = rule;
  out.pattern.root = sql::WithClause(p, clause, nullptr);
  out.replacement.root = sql::WithClause(r, clause, nullptr);
  return out;
}

std::optional<Rule> LiftPredicate(const Rule& rule) {
  const NodePtr& p = rule.pattern.root;
  const NodePtr& r = rule.replacement.root;
  if (p->kind() != NodeKind::kSelect || r->kind() != NodeKind::kSelect) {
    return std::nullopt;
  }
  if (p->size() != 1 || r->size() != 1) return std::nullopt;
  NodeKind k = p->child(0)->kind();
  if (k != NodeKind::kWhere && k != NodeKind::kHaving) return std::nullopt;
  if (r->child(0)->kind() != k) return std::nullopt;
  if (p->child(0)->size() != 1 || r->child(0)->size() != 1) {
    return std::nullopt;
  }
  return RuleFromTrees(p->child(0)->child(0), r->child(0)->child(0));
}

std::optional<Rule> DropConjunct(const Rule& rule, const NodePtr& conjunct) {
  const NodePtr& p = rule.pattern.root;
  const NodePtr& r = rule.replacement.root;
  if (p->kind() != NodeKind::kConjunction ||
      r->kind() != NodeKind::kConjunction || p->text() != r->text() ||
      p->text() != "AND") {
    return std::nullopt;
  }
  auto without = [&](const NodePtr& list) -> std::optional<NodePtr> {
    std::vector<NodePtr> kids;
    bool removed = false;
    for (const NodePtr& c : list->children()) {
      if (!removed && sql::Equal(c, conjunct)) {
        removed = true;
        continue;
      }
      kids.push_back(c);
    }
    if (!removed || kids.empty()) return std::nullopt;
    if (kids.size() == 1) return kids[0];
    return sql::WithChildren(list, std::move(kids));
  };
  for (const NodePtr& c : p->children()) {
    if (c->kind() == NodeKind::kVarSet) return std::nullopt;
  }
  std::optional<NodePtr> np = without(p);
  std::optional<NodePtr> nr = without(r);
  if (!np || !nr) return std::nullopt;
  if (!SelfContained(rule, {conjunct, conjunct})) return std::nullopt;
  return RuleFromTrees(*np, *nr);
}

std::string FreshVariable(const Rule& rule) {
  VarCounts all = RuleVars(rule);
  for (int i = 0;; ++i) {
    std::string name = "fresh" + std::to_string(i);
    if (!all.count(name)) return name;
  }
}

}  // namespace qb::suggest
