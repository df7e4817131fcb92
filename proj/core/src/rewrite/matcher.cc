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

#include "qb/rewrite/matcher.h"

#include <string>
#include <utility>
#include <vector>

#include "absl/strings/match.h"
#include "qb/status.h"

namespace qb::rewrite {
namespace {

using sql::Node;
using sql::NodeKind;
using sql::NodePtr;

constexpr char kVarOpen = '\x01';
constexpr char kVarClose = '\x02';

bool HasVarSetChild(const NodePtr& n) {
  for (const NodePtr& c : n->children()) {
    if (c->kind() == NodeKind::kVarSet) return true;
  }
  return false;
}

// A clause made only of set variables can match an absent clause.
bool VarSetOnly(const NodePtr& clause) {
  if (clause->size() == 0) return false;
  for (const NodePtr& c : clause->children()) {
    if (c->kind() != NodeKind::kVarSet) return false;
  }
  return true;
}

// Table references and bare names that denote the same table.
bool TableCompatible(const NodePtr& table, const NodePtr& ident) {
  if (table->kind() != NodeKind::kTableRef) return false;
  if (ident->kind() != NodeKind::kIdentifier) return false;
  return absl::EqualsIgnoreCase(sql::TableAliasOrName(table), ident->text());
}

bool BalancedVars(const std::string& s) {
  int open = 0;
  for (char c : s) {
    if (c == kVarOpen) {
      if (open) return false;
      open = 1;
    } else if (c == kVarClose) {
      if (!open) return false;
      open = 0;
    }
  }
  return open == 0;
}

class Matcher {
 public:
  using Cont = absl::FunctionRef<bool()>;

  explicit Matcher(const MatchLimits& limits) : limits_(limits) {}

  bool Root(const sql::Pattern& pattern, const NodePtr& q, Cont k) {
    const NodePtr& p = pattern.root;
    if (p->kind() == NodeKind::kSelect && q->kind() == NodeKind::kSelect) {
      return Clauses(p, q, /*strict=*/false, k);
    }
    if (p->kind() == NodeKind::kConjunction &&
        q->kind() == NodeKind::kConjunction && p->text() == q->text() &&
        !HasVarSetChild(p) && q->size() > p->size()) {
      return Commutative(p->children(), q->children(), /*allow_extra=*/true,
                         p->text(), k);
    }
    return Match(p, q, k);
  }

  Binding Snapshot() const {
    Binding b;
    for (const Entry& e : trail_) {
      switch (e.kind) {
        case Entry::kElem:
          b.element[e.name] = e.node;
          break;
        case Entry::kSet:
          b.set[e.name] = e.list;
          break;
        case Entry::kStr:
          b.string_parts[e.name] = e.text;
          break;
      }
    }
    b.carried_clauses = carried_clauses_;
    b.carried_conjuncts = carried_conjuncts_;
    b.carried_connective = carried_connective_;
    return b;
  }

  const absl::Status& error() const { return error_; }

 private:
  struct Entry {
    enum Kind { kElem, kSet, kStr } kind;
    std::string name;
    NodePtr node;
    std::vector<NodePtr> list;
    std::string text;
  };

  Entry* Find(const std::string& name) {
    for (auto it = trail_.rbegin(); it != trail_.rend(); ++it) {
      if (it->name == name) return &*it;
    }
    return nullptr;
  }

  bool Match(const NodePtr& p, const NodePtr& q, Cont k) {
    if (!error_.ok()) return false;
    switch (p->kind()) {
      case NodeKind::kVarElem:
        if (q->kind() == NodeKind::kVarSet) return false;
        return BindElem(p->text(), q, k);
      case NodeKind::kVarSet: {
        std::vector<NodePtr> list;
        if (q->kind() == NodeKind::kConjunction && q->text() == "AND") {
          list = q->children();
        } else {
          list = {q};
        }
        return BindSet(p->text(), std::move(list), k);
      }
      case NodeKind::kStringTemplate: {
        std::string s;
        if (!EncodeStringValue(q, &s)) return false;
        return Template(p->children(), 0, s, 0, k);
      }
      default:
        break;
    }
    if (p->concrete()) return sql::Equal(p, q) && k();
    if (!sql::HeaderEqual(p, q)) {
      if (p->kind() == NodeKind::kConjunction && HasVarSetChild(p)) {
        return Commutative(p->children(), {q}, false, p->text(), k);
      }
      return false;
    }
    switch (p->kind()) {
      case NodeKind::kSelect:
        return Clauses(p, q, /*strict=*/true, k);
      case NodeKind::kConjunction:
      case NodeKind::kFrom:
        return Commutative(p->children(), q->children(), false, p->text(), k);
      default:
        return Ordered(p->children(), 0, q->children(), 0, k);
    }
  }

  bool BindElem(const std::string& name, const NodePtr& q, Cont k) {
    Entry* e = Find(name);
    if (e == nullptr) {
      trail_.push_back({Entry::kElem, name, q, {}, ""});
      bool r = k();
      trail_.pop_back();
      return r;
    }
    if (e->kind == Entry::kSet) return false;
    if (e->kind == Entry::kStr) {
      std::string s;
      return EncodeStringValue(q, &s) && s == e->text && k();
    }
    if (sql::Equal(e->node, q)) return k();
    if (TableCompatible(e->node, q)) return k();
    if (TableCompatible(q, e->node)) {
      // Prefer the full table reference over a bare alias.
      NodePtr saved = e->node;
      e->node = q;
      bool r = k();
      Entry* again = Find(name);
      if (again) again->node = saved;
      return r;
    }
    return false;
  }

  bool BindSet(const std::string& name, std::vector<NodePtr> list, Cont k) {
    Entry* e = Find(name);
    if (e == nullptr) {
      trail_.push_back({Entry::kSet, name, nullptr, std::move(list), ""});
      bool r = k();
      trail_.pop_back();
      return r;
    }
    if (e->kind != Entry::kSet) return false;
    return sql::EqualLists(e->list, list) && k();
  }

  bool BindStr(const std::string& name, std::string text, Cont k) {
    Entry* e = Find(name);
    if (e == nullptr) {
      trail_.push_back({Entry::kStr, name, nullptr, {}, std::move(text)});
      bool r = k();
      trail_.pop_back();
      return r;
    }
    if (e->kind == Entry::kStr) return e->text == text && k();
    if (e->kind == Entry::kElem) {
      std::string s;
      return EncodeStringValue(e->node, &s) && s == text && k();
    }
    return false;
  }

  bool Template(const std::vector<NodePtr>& segs, size_t si,
                const std::string& s, size_t pos, Cont k) {
    if (si == segs.size()) return pos == s.size() && k();
    const NodePtr& seg = segs[si];
    if (seg->kind() == NodeKind::kTemplateText) {
      const std::string& t = seg->text();
      if (s.compare(pos, t.size(), t) != 0) return false;
      return Template(segs, si + 1, s, pos + t.size(), k);
    }
    if (si + 1 == segs.size()) {
      if (pos >= s.size()) return false;
      std::string rest = s.substr(pos);
      if (!BalancedVars(rest)) return false;
      return BindStr(seg->text(), std::move(rest), k);
    }
    const std::string& anchor = segs[si + 1]->text();
    for (size_t at = s.find(anchor, pos + 1); at != std::string::npos;
         at = s.find(anchor, at + 1)) {
      std::string part = s.substr(pos, at - pos);
      if (!BalancedVars(part)) continue;
      if (BindStr(seg->text(), part, [&] {
            return Template(segs, si + 1, s, at, k);
          })) {
        return true;
      }
    }
    return false;
  }

  bool Ordered(const std::vector<NodePtr>& ps, size_t i,
               const std::vector<NodePtr>& qs, size_t j, Cont k) {
    if (i == ps.size()) return j == qs.size() && k();
    const NodePtr& p = ps[i];
    if (p->kind() == NodeKind::kVarSet) {
      for (size_t len = 0; j + len <= qs.size(); ++len) {
        std::vector<NodePtr> slice(qs.begin() + j, qs.begin() + j + len);
        if (BindSet(p->text(), std::move(slice), [&] {
              return Ordered(ps, i + 1, qs, j + len, k);
            })) {
          return true;
        }
        if (!error_.ok()) return false;
      }
      return false;
    }
    if (j >= qs.size()) return false;
    return Match(p, qs[j], [&] { return Ordered(ps, i + 1, qs, j + 1, k); });
  }

  struct CommState {
    std::vector<size_t> fixed;
    std::vector<std::string> sets;
    std::vector<bool> used;
    bool allow_extra;
    std::string connective;
  };

  bool Commutative(const std::vector<NodePtr>& ps,
                   const std::vector<NodePtr>& qs, bool allow_extra,
                   const std::string& connective, Cont k) {
    CommState st;
    for (size_t i = 0; i < ps.size(); ++i) {
      if (ps[i]->kind() == NodeKind::kVarSet) {
        st.sets.push_back(ps[i]->text());
      } else {
        st.fixed.push_back(i);
      }
    }
    if (st.fixed.size() > qs.size()) return false;
    if (st.sets.empty() && !allow_extra && st.fixed.size() != qs.size()) {
      return false;
    }
    if (qs.size() > limits_.max_permuted_list && st.fixed.size() >= 2) {
      error_ = MakeError(ErrorKind::kMatchTooLarge,
                         "unordered list of " + std::to_string(qs.size()) +
                             " items exceeds the matching limit of " +
                             std::to_string(limits_.max_permuted_list));
      return false;
    }
    st.used.assign(qs.size(), false);
    st.allow_extra = allow_extra;
    st.connective = connective;
    return Assign(ps, qs, &st, 0, k);
  }

  bool Assign(const std::vector<NodePtr>& ps, const std::vector<NodePtr>& qs,
              CommState* st, size_t fi, Cont k) {
    if (fi == st->fixed.size()) {
      std::vector<NodePtr> rest;
      for (size_t j = 0; j < qs.size(); ++j) {
        if (!st->used[j]) rest.push_back(qs[j]);
      }
      if (st->sets.empty()) {
        if (!st->allow_extra) return k();
        carried_conjuncts_ = rest;
        carried_connective_ = st->connective;
        bool r = k();
        carried_conjuncts_.clear();
        return r;
      }
      return BindSets(st->sets, 0, std::move(rest), k);
    }
    const NodePtr& p = ps[st->fixed[fi]];
    for (size_t j = 0; j < qs.size(); ++j) {
      if (st->used[j]) continue;
      if (p->hash() != qs[j]->hash() && p->concrete()) continue;
      st->used[j] = true;
      bool r = Match(p, qs[j], [&] { return Assign(ps, qs, st, fi + 1, k); });
      st->used[j] = false;
      if (r) return true;
      if (!error_.ok()) return false;
    }
    return false;
  }

  bool BindSets(const std::vector<std::string>& sets, size_t i,
                std::vector<NodePtr> rest, Cont k) {
    if (i == sets.size()) return k();
    std::vector<NodePtr> mine = i == 0 ? std::move(rest)
                                       : std::vector<NodePtr>{};
    return BindSet(sets[i], std::move(mine),
                   [&] { return BindSets(sets, i + 1, {}, k); });
  }

  bool Clauses(const NodePtr& p, const NodePtr& q, bool strict, Cont k) {
    std::vector<std::pair<NodePtr, NodePtr>> pairs;
    std::vector<std::string> empty_sets;
    for (const NodePtr& pc : p->children()) {
      NodePtr qc = sql::FindClause(q, pc->kind());
      if (qc) {
        pairs.emplace_back(pc, qc);
      } else if (VarSetOnly(pc)) {
        for (const NodePtr& v : pc->children()) empty_sets.push_back(v->text());
      } else {
        return false;
      }
    }
    std::vector<NodePtr> extras;
    for (const NodePtr& qc : q->children()) {
      if (!sql::FindClause(p, qc->kind())) extras.push_back(qc);
    }
    if (strict && !extras.empty()) return false;
    auto finish = [&] {
      if (strict) return k();
      std::vector<NodePtr> saved = std::move(carried_clauses_);
      carried_clauses_ = extras;
      bool r = k();
      carried_clauses_ = std::move(saved);
      return r;
    };
    return EmptySets(empty_sets, 0, [&] { return Pairs(pairs, 0, finish); });
  }

  bool EmptySets(const std::vector<std::string>& names, size_t i, Cont k) {
    if (i == names.size()) return k();
    return BindSet(names[i], {}, [&] { return EmptySets(names, i + 1, k); });
  }

  bool Pairs(const std::vector<std::pair<NodePtr, NodePtr>>& pairs, size_t i,
             Cont k) {
    if (i == pairs.size()) return k();
    return Match(pairs[i].first, pairs[i].second,
                 [&] { return Pairs(pairs, i + 1, k); });
  }

  MatchLimits limits_;
  std::vector<Entry> trail_;
  std::vector<NodePtr> carried_clauses_;
  std::vector<NodePtr> carried_conjuncts_;
  std::string carried_connective_ = "AND";
  absl::Status error_;
};

bool IsExpressionSite(NodeKind kind) {
  switch (kind) {
    case NodeKind::kColumnRef:
    case NodeKind::kLiteral:
    case NodeKind::kTypedLiteral:
    case NodeKind::kInterval:
    case NodeKind::kFuncCall:
    case NodeKind::kCast:
    case NodeKind::kBinaryOp:
    case NodeKind::kUnaryOp:
    case NodeKind::kConjunction:
    case NodeKind::kBetween:
    case NodeKind::kInList:
    case NodeKind::kCase:
    case NodeKind::kSubquery:
    case NodeKind::kRaw:
    case NodeKind::kVarElem:
    case NodeKind::kStringTemplate:
      return true;
    default:
      return false;
  }
}

enum class Slot { kOther, kFromItem, kColumnPart };

bool IsListKind(NodeKind kind) {
  switch (kind) {
    case NodeKind::kSelectList:
    case NodeKind::kFrom:
    case NodeKind::kGroupBy:
    case NodeKind::kOrderBy:
    case NodeKind::kFuncCall:
    case NodeKind::kInList:
    case NodeKind::kConjunction:
    case NodeKind::kUsing:
    case NodeKind::kColumnRef:
    case NodeKind::kSelect:
      return true;
    default:
      return false;
  }
}

class Instantiator {
 public:
  explicit Instantiator(const Binding& b) : b_(b) {}

  std::vector<NodePtr> Inst(const NodePtr& n, Slot slot) {
    if (!error_.ok()) return {};
    if (n->concrete()) return {n};
    switch (n->kind()) {
      case NodeKind::kVarElem: {
        auto it = b_.element.find(n->text());
        if (it != b_.element.end()) return Coerce(it->second, slot);
        auto st = b_.string_parts.find(n->text());
        if (st != b_.string_parts.end()) return {DecodeStringValue(st->second)};
        Unbound(n->text());
        return {};
      }
      case NodeKind::kVarSet: {
        auto it = b_.set.find(n->text());
        if (it != b_.set.end()) return it->second;
        Unbound(n->text());
        return {};
      }
      case NodeKind::kStringTemplate: {
        std::string text;
        for (const NodePtr& seg : n->children()) {
          if (seg->kind() == NodeKind::kTemplateText) {
            text += seg->text();
            continue;
          }
          auto st = b_.string_parts.find(seg->text());
          if (st != b_.string_parts.end()) {
            text += st->second;
            continue;
          }
          auto el = b_.element.find(seg->text());
          std::string enc;
          if (el != b_.element.end() && EncodeStringValue(el->second, &enc)) {
            text += enc;
            continue;
          }
          if (el != b_.element.end()) {
            error_ = MakeError(ErrorKind::kInvalidArgument,
                               "variable '" + seg->text() +
                                   "' is not a string and cannot be spliced");
            return {};
          }
          Unbound(seg->text());
          return {};
        }
        return {DecodeStringValue(text)};
      }
      default:
        break;
    }
    std::vector<NodePtr> kids;
    bool list = IsListKind(n->kind());
    for (size_t i = 0; i < n->size(); ++i) {
      Slot child_slot = Slot::kOther;
      if (n->kind() == NodeKind::kFrom ||
          (n->kind() == NodeKind::kJoin && i < 2)) {
        child_slot = Slot::kFromItem;
      } else if (n->kind() == NodeKind::kColumnRef) {
        child_slot = Slot::kColumnPart;
      }
      std::vector<NodePtr> items = Inst(n->child(i), child_slot);
      if (!error_.ok()) return {};
      if (list || items.size() == 1) {
        kids.insert(kids.end(), items.begin(), items.end());
      } else {
        kids.push_back(sql::MakeConjunction("AND", std::move(items)));
      }
    }
    return {sql::WithChildren(n, std::move(kids))};
  }

  const absl::Status& error() const { return error_; }

 private:
  std::vector<NodePtr> Coerce(const NodePtr& v, Slot slot) {
    if (slot == Slot::kColumnPart) {
      if (v->kind() == NodeKind::kTableRef) {
        bool quoted = !v->alias().empty()
                          ? v->has_flag(sql::kAliasQuoted)
                          : (v->size() && v->children().back()->has_flag(
                                              sql::kQuoted));
        return {sql::MakeIdentifier(sql::TableAliasOrName(v), quoted)};
      }
      if (v->kind() == NodeKind::kColumnRef) return v->children();
    }
    if (slot == Slot::kFromItem) {
      if (v->kind() == NodeKind::kIdentifier) {
        return {Node::Make(NodeKind::kTableRef, "", {v})};
      }
      if (v->kind() == NodeKind::kColumnRef) {
        return {Node::Make(NodeKind::kTableRef, "", v->children())};
      }
    }
    return {v};
  }

  void Unbound(const std::string& name) {
    error_ = MakeError(ErrorKind::kUnboundVariable,
                       "unbound variable '" + name + "'");
  }

  const Binding& b_;
  absl::Status error_;
};

}  // namespace

bool EncodeStringValue(const NodePtr& node, std::string* out) {
  if (node->kind() == NodeKind::kLiteral &&
      node->literal() == sql::LiteralType::kString) {
    *out = node->text();
    return true;
  }
  if (node->kind() == NodeKind::kStringTemplate) {
    out->clear();
    for (const NodePtr& seg : node->children()) {
      if (seg->kind() == NodeKind::kVarElem) {
        *out += kVarOpen + seg->text() + kVarClose;
      } else {
        *out += seg->text();
      }
    }
    return true;
  }
  return false;
}

NodePtr DecodeStringValue(const std::string& text) {
  if (text.find(kVarOpen) == std::string::npos) return sql::MakeString(text);
  std::vector<NodePtr> segs;
  std::string fixed;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] == kVarOpen) {
      size_t close = text.find(kVarClose, i);
      if (!fixed.empty()) {
        segs.push_back(Node::Make(NodeKind::kTemplateText, fixed, {}));
        fixed.clear();
      }
      segs.push_back(sql::MakeVarElem(text.substr(i + 1, close - i - 1)));
      i = close + 1;
      continue;
    }
    fixed += text[i++];
  }
  if (!fixed.empty()) {
    segs.push_back(Node::Make(NodeKind::kTemplateText, fixed, {}));
  }
  return Node::Make(NodeKind::kStringTemplate, "", std::move(segs));
}

absl::StatusOr<bool> MatchAt(const sql::Pattern& pattern, const NodePtr& node,
                             absl::FunctionRef<bool(const Binding&)> accept,
                             const MatchLimits& limits) {
  Matcher m(limits);
  bool ok = m.Root(pattern, node, [&] { return accept(m.Snapshot()); });
  if (!m.error().ok()) return m.error();
  return ok;
}

std::vector<sql::Path> MatchSites(const sql::Pattern& pattern,
                                  const NodePtr& query) {
  std::vector<sql::Path> sites;
  bool statement = pattern.level == sql::FragmentLevel::kStatement;
  NodeKind root_kind = pattern.root->kind();
  sql::VisitPreorder(query, [&](const NodePtr& n, const sql::Path& path) {
    if (statement) {
      if (n->kind() == root_kind) sites.push_back(path);
    } else if (IsExpressionSite(n->kind())) {
      sites.push_back(path);
    }
    return true;
  });
  return sites;
}

absl::StatusOr<std::optional<MatchResult>> MatchFirst(
    const sql::Pattern& pattern, const NodePtr& query,
    const MatchLimits& limits) {
  for (const sql::Path& site : MatchSites(pattern, query)) {
    std::optional<MatchResult> result;
    auto ok = MatchAt(pattern, sql::NodeAt(query, site),
                      [&](const Binding& b) {
                        result = MatchResult{site, b};
                        return true;
                      },
                      limits);
    if (!ok.ok()) return ok.status();
    if (*ok) return result;
  }
  return std::optional<MatchResult>();
}

std::optional<Binding> Match(const sql::Pattern& pattern,
                             const NodePtr& query) {
  auto r = MatchFirst(pattern, query);
  if (!r.ok() || !r->has_value()) return std::nullopt;
  return (*r)->binding;
}

absl::StatusOr<NodePtr> Instantiate(const sql::Pattern& replacement,
                                    const Binding& binding) {
  Instantiator inst(binding);
  std::vector<NodePtr> items = inst.Inst(replacement.root, Slot::kOther);
  if (!inst.error().ok()) return inst.error();
  NodePtr out = items.size() == 1 ? items[0]
                                  : sql::MakeConjunction("AND", items);
  if (!binding.carried_clauses.empty() && out->kind() == NodeKind::kSelect) {
    for (const NodePtr& c : binding.carried_clauses) {
      if (!sql::FindClause(out, c->kind())) {
        out = sql::WithClause(out, c->kind(), c);
      }
    }
  }
  if (!binding.carried_conjuncts.empty()) {
    std::vector<NodePtr> kids = {out};
    kids.insert(kids.end(), binding.carried_conjuncts.begin(),
                binding.carried_conjuncts.end());
    out = sql::MakeConjunction(binding.carried_connective, std::move(kids));
  }
  return out;
}

}  // namespace qb::rewrite
