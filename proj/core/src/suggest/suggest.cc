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

#include "qb/suggest/suggest.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "qb/sql/parser.h"
#include "qb/status.h"
#include "qb/suggest/transform.h"

namespace qb::suggest {
namespace {

struct Candidate {
  int id = -1;
  std::vector<int> covered;
  Rational benefit;
};

class Search {
 public:
  Search(const std::vector<RewritePair>& pairs, const SuggestOptions& options,
         RuleGraph* graph)
      : pairs_(pairs), options_(options), graph_(*graph) {}

  absl::StatusOr<SuggestReport> Run() {
    start_ = Clock::now();
    SuggestReport& report = report_;
    // Seeds; identical pairs share one rule.
    for (size_t i = 0; i < pairs_.size(); ++i) {
      std::optional<varsql::Rule> seed = FinishCandidate(PairAsRule(pairs_[i]));
      if (!seed) {
        return MakeError(ErrorKind::kInvalidArgument,
                         "example " + std::to_string(i) +
                             " cannot be read as a rule");
      }
      absl::StatusOr<int> id = graph_.Intern(*seed, 0);
      if (!id.ok()) return id.status();
      if (!owners_.count(*id)) rules_.push_back(*id);
      owners_[*id].insert(i);
    }
    report.stats.total_dl_before = TotalDl(rules_);
    const double beta = options_.cost.EffectiveBeta();
    std::vector<varsql::Rule> working_rules;
    while (true) {
      ++report.stats.iterations;
      absl::StatusOr<Exploration> explored =
          ExploreCandidates(graph_, rules_, options_.explorer);
      if (!explored.ok()) return explored.status();
      report.stats.candidates_explored += explored->touched;
      Rational total = TotalDl(rules_);
      double workload_cost = 0;
      if (beta < 1.0) workload_cost = WorkloadCost(Rules(rules_), options_.cost);
      std::optional<Candidate> best;
      for (int c : explored->candidates) {
        absl::Status deadline = graph_.CheckDeadline();
        if (!deadline.ok()) return deadline;
        if (owners_.count(c)) continue;
        std::vector<int> covered = CoveredBy(c);
        if (covered.empty() || BreaksAnyPair(c)) continue;
        Rational delta = -graph_.node(c).dl;
        for (int r : covered) delta += graph_.node(r).dl;
        Rational benefit = delta;
        if (beta < 1.0) {
          std::vector<int> next = Replace(covered, c);
          double after = WorkloadCost(Rules(next), options_.cost);
          double cost_gain =
              workload_cost > 0 ? (workload_cost - after) / workload_cost : 0;
          benefit = Rational(beta) * delta / total + Rational(1.0 - beta) *
                                                         Rational(cost_gain);
        }
        if (!best || Better(c, benefit, *best)) {
          best = Candidate{c, covered, benefit};
        }
      }
      if (!best || best->benefit <= 0) break;
      std::set<size_t> owned;
      for (int r : best->covered) {
        owned.insert(owners_[r].begin(), owners_[r].end());
        owners_.erase(r);
      }
      rules_ = Replace(best->covered, best->id);
      owners_[best->id] = std::move(owned);
    }
    if (pairs_.size() == 1 && options_.generalize_single_pair) {
      GeneralizeSinglePair();
    }
    report.stats.total_dl_after = TotalDl(rules_);
    std::vector<int> ordered = rules_;
    std::sort(ordered.begin(), ordered.end(), [&](int a, int b) {
      return *owners_[a].begin() < *owners_[b].begin();
    });
    int64_t next_id = 1;
    for (int id : ordered) {
      SuggestedRule out;
      out.rule = graph_.node(id).rule;
      out.rule.id = next_id++;
      out.rule.name = "suggested_" + std::to_string(out.rule.id);
      out.dl = graph_.node(id).dl;
      out.covered_examples.assign(owners_[id].begin(), owners_[id].end());
      report.rules.push_back(std::move(out));
    }
    report.stats.wall_time_ms = ElapsedMs();
    return report;
  }

  SuggestStats PartialStats() const {
    SuggestStats stats = report_.stats;
    stats.total_dl_after = TotalDl(rules_);
    stats.wall_time_ms = ElapsedMs();
    return stats;
  }

 private:
  int64_t ElapsedMs() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                                 start_)
        .count();
  }

  Rational TotalDl(const std::vector<int>& ids) const {
    Rational total = 0;
    for (int id : ids) total += graph_.node(id).dl;
    return total;
  }

  std::vector<varsql::Rule> Rules(const std::vector<int>& ids) const {
    std::vector<varsql::Rule> out;
    for (int id : ids) out.push_back(graph_.node(id).rule);
    return out;
  }

  std::vector<int> Replace(const std::vector<int>& covered, int c) const {
    std::vector<int> next;
    for (int r : rules_) {
      if (std::find(covered.begin(), covered.end(), r) == covered.end()) {
        next.push_back(r);
      }
    }
    next.push_back(c);
    return next;
  }

  bool Better(int c, const Rational& benefit, const Candidate& best) const {
    if (benefit != best.benefit) return benefit > best.benefit;
    const CandidateRule& a = graph_.node(c);
    const CandidateRule& b = graph_.node(best.id);
    if (a.dl != b.dl) return a.dl < b.dl;
    return a.key < b.key;
  }

  PairOutcome Outcome(int c, size_t pair) {
    auto key = std::make_pair(c, pair);
    auto it = outcomes_.find(key);
    if (it != outcomes_.end()) return it->second;
    PairOutcome o = ApplyToPair(graph_.node(c).rule, pairs_[pair]);
    outcomes_[key] = o;
    return o;
  }

  bool BreaksAnyPair(int c) {
    for (size_t p = 0; p < pairs_.size(); ++p) {
      if (Outcome(c, p) == PairOutcome::kDifferent) return true;
    }
    return false;
  }

  // Current rules that `c` covers, keeping every example they own exact.
  std::vector<int> CoveredBy(int c) {
    std::vector<int> out;
    for (int r : rules_) {
      if (!graph_.Covers(c, r)) continue;
      bool exact = true;
      for (size_t p : owners_[r]) {
        if (Outcome(c, p) != PairOutcome::kExact) {
          exact = false;
          break;
        }
      }
      if (exact) out.push_back(r);
    }
    return out;
  }

  static bool ReplacementUsesAllVariables(const varsql::Rule& rule) {
    std::vector<sql::VarOccurrence> in_pattern;
    std::vector<sql::VarOccurrence> in_replacement;
    sql::CollectVariables(rule.pattern.root, &in_pattern);
    sql::CollectVariables(rule.replacement.root, &in_replacement);
    std::set<std::string> used;
    for (const auto& v : in_replacement) used.insert(v.name);
    for (const auto& v : in_pattern) {
      if (!used.count(v.name)) return false;
    }
    return true;
  }

  // Picks the explored rule with the fewest fixed elements that rewrites the
  // only example exactly and keeps every matched part in its output.
  void GeneralizeSinglePair() {
    if (rules_.size() != 1) return;
    int seed = rules_[0];
    int64_t best_co = CountElements(graph_.node(seed).rule).c_o;
    int best = seed;
    for (size_t id = 0; id < graph_.size(); ++id) {
      int c = static_cast<int>(id);
      if (c == seed) continue;
      const CandidateRule& node = graph_.node(c);
      int64_t co = CountElements(node.rule).c_o;
      if (co > best_co) continue;
      if (co == best_co && best != seed) {
        const CandidateRule& b = graph_.node(best);
        if (node.dl > b.dl || (node.dl == b.dl && node.key >= b.key)) continue;
      }
      if (co == best_co && best == seed) continue;
      if (!ReplacementUsesAllVariables(node.rule)) continue;
      if (Outcome(c, 0) != PairOutcome::kExact) continue;
      best = c;
      best_co = co;
    }
    if (best == seed) return;
    owners_[best] = owners_[seed];
    owners_.erase(seed);
    rules_ = {best};
  }

  const std::vector<RewritePair>& pairs_;
  const SuggestOptions& options_;
  RuleGraph& graph_;
  std::vector<int> rules_;
  std::map<int, std::set<size_t>> owners_;
  std::map<std::pair<int, size_t>, PairOutcome> outcomes_;
  SuggestReport report_;
  Clock::time_point start_;
};

}  // namespace

absl::StatusOr<SuggestReport> SuggestRules(
    const std::vector<RewritePair>& pairs, const SuggestOptions& options,
    SuggestStats* partial) {
  if (pairs.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "no examples given");
  }
  absl::Status valid = options.mdl.Validate();
  if (!valid.ok()) return valid;
  valid = options.cost.Validate();
  if (!valid.ok()) return valid;
  std::optional<Clock::time_point> deadline;
  if (options.budget) deadline = Clock::now() + *options.budget;
  RuleGraph graph(options.mdl, deadline);
  Search search(pairs, options, &graph);
  absl::StatusOr<SuggestReport> report = search.Run();
  if (!report.ok() && partial) *partial = search.PartialStats();
  return report;
}

absl::StatusOr<std::vector<varsql::Rule>> SuggestRules(
    const std::vector<RewritePair>& pairs, const ExplorerConfig& explorer,
    const MdlConfig& mdl, const CostConfig& cost) {
  SuggestOptions options;
  options.explorer = explorer;
  options.mdl = mdl;
  options.cost = cost;
  absl::StatusOr<SuggestReport> report = SuggestRules(pairs, options);
  if (!report.ok()) return report.status();
  std::vector<varsql::Rule> rules;
  for (const SuggestedRule& r : report->rules) rules.push_back(r.rule);
  return rules;
}

absl::StatusOr<std::vector<RewritePair>> ParseExamples(
    const nlohmann::json& json, sql::Dialect dialect) {
  if (!json.is_array()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "examples must be a JSON array");
  }
  std::vector<RewritePair> pairs;
  for (size_t i = 0; i < json.size(); ++i) {
    const nlohmann::json& item = json[i];
    if (!item.is_object() || !item.contains("original") ||
        !item.contains("rewritten") || !item["original"].is_string() ||
        !item["rewritten"].is_string()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       "example " + std::to_string(i) +
                           " needs string fields original and rewritten");
    }
    absl::StatusOr<RewritePair> pair =
        MakePair(item["original"].get<std::string>(),
                 item["rewritten"].get<std::string>(), dialect);
    if (!pair.ok()) {
      std::string side;
      if (!sql::ParseQuery(item["original"].get<std::string>(), dialect).ok()) {
        side = " original";
      } else if (!sql::ParseQuery(item["rewritten"].get<std::string>(),
                                  dialect)
                      .ok()) {
        side = " rewritten";
      }
      return MakeError(KindOf(pair.status()),
                       "example " + std::to_string(i) + side + ": " +
                           std::string(pair.status().message()),
                       PositionOf(pair.status()));
    }
    pairs.push_back(std::move(*pair));
  }
  return pairs;
}

absl::StatusOr<std::vector<RewritePair>> ParseExamplesText(
    std::string_view text, sql::Dialect dialect) {
  nlohmann::json json = nlohmann::json::parse(text, nullptr, false);
  if (json.is_discarded()) {
    return MakeError(ErrorKind::kInvalidArgument, "examples are not JSON");
  }
  return ParseExamples(json, dialect);
}

nlohmann::json StatsToJson(const SuggestStats& s) {
  return {{"candidates_explored", s.candidates_explored},
          {"iterations", s.iterations},
          {"total_dl_before", ToDouble(s.total_dl_before)},
          {"total_dl_after", ToDouble(s.total_dl_after)},
          {"total_dl_before_exact", ToString(s.total_dl_before)},
          {"total_dl_after_exact", ToString(s.total_dl_after)},
          {"wall_time_ms", s.wall_time_ms}};
}

nlohmann::json ReportToJson(const SuggestReport& report) {
  nlohmann::json rules = nlohmann::json::array();
  for (const SuggestedRule& r : report.rules) {
    nlohmann::json j = varsql::RuleToJson(r.rule);
    j["dl"] = ToDouble(r.dl);
    j["dl_exact"] = ToString(r.dl);
    j["covered_examples"] = r.covered_examples;
    rules.push_back(std::move(j));
  }
  return {{"rules", rules}, {"stats", StatsToJson(report.stats)}};
}

}  // namespace qb::suggest
