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

#include "qb/service/api.h"

#include <chrono>
#include <utility>
#include <vector>

#include "absl/strings/numbers.h"
#include "qb/rewrite/engine.h"
#include "qb/sql/parser.h"
#include "qb/sql/serializer.h"
#include "qb/status.h"
#include "qb/suggest/suggest.h"

namespace qb::service {
namespace {

constexpr char kApiPrefix[] = "/api/v1/";

bool ParseId(const std::string& text, int64_t* id) {
  return absl::SimpleAtoi(text, id) && *id > 0;
}

// Splits "12/enable" into "12" and "enable".
std::pair<std::string, std::string> Head(const std::string& rest) {
  size_t slash = rest.find('/');
  if (slash == std::string::npos) return {rest, ""};
  return {rest.substr(0, slash), rest.substr(slash + 1)};
}

ApiResponse MethodNotAllowed() {
  return ErrorResponse(405, "MethodNotAllowed", "method not allowed here");
}

ApiResponse NotFound(const std::string& what) {
  return ErrorResponse(404, "NotFound", what);
}

}  // namespace

int HttpStatusFor(const absl::Status& status) {
  switch (KindOf(status)) {
    case ErrorKind::kParseError:
    case ErrorKind::kUnsupportedStatement:
    case ErrorKind::kMalformedVariable:
    case ErrorKind::kUnknownProcedure:
    case ErrorKind::kUnboundVariable:
    case ErrorKind::kDegenerateRule:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kMissingSchema:
    case ErrorKind::kScopeNotFound:
      return 400;
    case ErrorKind::kNotFound:
      return 404;
    case ErrorKind::kConflict:
      return 409;
    case ErrorKind::kExplosionGuard:
    case ErrorKind::kMatchTooLarge:
      return 422;
    case ErrorKind::kBudgetExceeded:
      return 503;
    case ErrorKind::kIo:
    case ErrorKind::kNone:
      return 500;
  }
  return 500;
}

ApiResponse ErrorResponse(int http_status, const std::string& error,
                          const std::string& detail) {
  return {http_status, {{"error", error}, {"detail", detail}}};
}

ApiResponse ErrorResponse(const absl::Status& status) {
  ErrorKind kind = KindOf(status);
  std::string name = kind == ErrorKind::kNone ? "Internal" : ErrorKindName(kind);
  ApiResponse out = ErrorResponse(HttpStatusFor(status), name,
                                  std::string(status.message()));
  if (PositionOf(status) >= 0) out.body["position"] = PositionOf(status);
  return out;
}

nlohmann::json RuleResource(const varsql::Rule& rule) {
  nlohmann::json j = varsql::RuleToJson(rule);
  j["text"] = varsql::SerializeRule(rule);
  return j;
}

Api::Api(RuleStore* store, ServiceConfig config)
    : store_(store), config_(std::move(config)) {}

ApiResponse Api::Handle(const std::string& method, const std::string& path,
                        const std::string& body,
                        const std::map<std::string, std::string>& query) {
  if (path == "/healthz") {
    if (method != "GET") return MethodNotAllowed();
    return {200, {{"status", "ok"}}};
  }
  if (path.rfind(kApiPrefix, 0) != 0) return NotFound("no route " + path);
  nlohmann::json json;
  if (method == "POST" || method == "PUT") {
    json = nlohmann::json::parse(body.empty() ? "{}" : body, nullptr, false);
    if (json.is_discarded() || !json.is_object()) {
      return ErrorResponse(400, "InvalidArgument",
                           "request body must be a JSON object");
    }
  }
  std::string rest = path.substr(sizeof(kApiPrefix) - 1);
  auto [resource, tail] = Head(rest);
  if (resource == "rewrite") {
    if (method != "POST" || !tail.empty()) return MethodNotAllowed();
    return Rewrite(json);
  }
  if (resource == "suggest") {
    if (method != "POST" || !tail.empty()) return MethodNotAllowed();
    return Suggest(json);
  }
  if (resource == "rules") return Rules(method, tail, json, query);
  if (resource == "workspaces") return Workspaces(method, tail, json);
  return NotFound("no route " + path);
}

sql::Dialect Api::DialectFor(const StoreState& state,
                             int64_t workspace) const {
  auto it = state.workspaces.find(workspace);
  if (it != state.workspaces.end() && it->second.database) {
    return it->second.database->dialect;
  }
  return config_.default_dialect;
}

ApiResponse Api::Rewrite(const nlohmann::json& request) {
  if (!request.contains("sql") || !request["sql"].is_string()) {
    return ErrorResponse(400, "InvalidArgument", "'sql' must be a string");
  }
  std::string text = request["sql"].get<std::string>();
  int64_t workspace = kDefaultWorkspace;
  bool explain = false;
  try {
    workspace = request.value("workspace", kDefaultWorkspace);
    explain = request.value("explain", false);
  } catch (const nlohmann::json::exception& e) {
    return ErrorResponse(400, "InvalidArgument", e.what());
  }
  std::shared_ptr<const StoreState> state = store_->Snapshot();
  if (!state->workspaces.count(workspace)) {
    return NotFound("no workspace " + std::to_string(workspace));
  }
  sql::Dialect dialect = DialectFor(*state, workspace);
  if (request.contains("dialect") && request["dialect"].is_string()) {
    absl::StatusOr<sql::Dialect> d =
        sql::ParseDialect(request["dialect"].get<std::string>());
    if (!d.ok()) return ErrorResponse(d.status());
    dialect = *d;
  }
  nlohmann::json out = {{"sql", text}, {"rewritten", false}};
  absl::StatusOr<sql::NodePtr> query = sql::ParseQuery(text, dialect);
  if (!query.ok()) {
    // Fail open: the application gets its own query back.
    out["warning"] = "not rewritten: " + std::string(query.status().message());
    return {200, out};
  }
  rewrite::RewriteLimits limits;
  limits.max_steps = config_.max_steps;
  limits.apply.dialect = dialect;
  auto schema_it = state->schemas.find(workspace);
  const sql::SchemaCatalog* schema =
      schema_it == state->schemas.end() ? nullptr : schema_it->second.get();
  rewrite::RewriteResult result =
      rewrite::Rewrite(*query, state->RulesOf(workspace), schema, limits);
  if (!result.trace.steps.empty()) {
    out["sql"] = sql::Serialize(result.query, dialect);
    out["rewritten"] = true;
  }
  if (explain) out["trace"] = rewrite::TraceToJson(result.trace, dialect);
  return {200, out};
}

ApiResponse Api::Suggest(const nlohmann::json& request) {
  nlohmann::json pairs_json;
  if (request.contains("pairs")) {
    pairs_json = request["pairs"];
  } else if (request.contains("examples")) {
    pairs_json = request["examples"];
  }
  if (!pairs_json.is_array() || pairs_json.empty()) {
    return ErrorResponse(400, "InvalidArgument",
                         "'pairs' must be a non-empty array");
  }
  sql::Dialect dialect = config_.default_dialect;
  suggest::SuggestOptions options;
  options.budget = std::chrono::milliseconds(config_.suggest_budget_ms);
  try {
    if (request.contains("dialect")) {
      absl::StatusOr<sql::Dialect> d =
          sql::ParseDialect(request["dialect"].get<std::string>());
      if (!d.ok()) return ErrorResponse(d.status());
      dialect = *d;
    }
    std::string strategy = request.value("strategy", std::string());
    absl::StatusOr<suggest::ExplorerConfig> explorer =
        suggest::ParseStrategy(strategy);
    if (!explorer.ok()) return ErrorResponse(explorer.status());
    options.explorer = *explorer;
    nlohmann::json params = request.value("params", nlohmann::json::object());
    if (!params.is_object()) {
      return ErrorResponse(400, "InvalidArgument",
                           "'params' must be an object");
    }
    if (params.contains("k")) options.explorer.k = params["k"].get<int>();
    if (params.contains("m")) options.explorer.m = params["m"].get<int>();
    if (params.contains("mdl")) {
      absl::StatusOr<suggest::MdlConfig> mdl =
          suggest::ParseMdlConfig(params["mdl"].get<std::string>());
      if (!mdl.ok()) return ErrorResponse(mdl.status());
      options.mdl = *mdl;
    }
    if (params.contains("beta")) {
      options.cost.beta = params["beta"].get<double>();
      options.cost.provider = suggest::StaticCostProvider(dialect);
      options.cost.dialect = dialect;
    }
    if (params.contains("budget_ms")) {
      int64_t ms = params["budget_ms"].get<int64_t>();
      if (ms > 0 && ms < config_.suggest_budget_ms) {
        options.budget = std::chrono::milliseconds(ms);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    return ErrorResponse(400, "InvalidArgument", e.what());
  }
  if (options.explorer.k < 1 || options.explorer.m < 1) {
    return ErrorResponse(400, "InvalidArgument", "k and m must be positive");
  }
  absl::StatusOr<std::vector<suggest::RewritePair>> pairs =
      suggest::ParseExamples(pairs_json, dialect);
  if (!pairs.ok()) {
    ApiResponse error = ErrorResponse(pairs.status());
    error.status = 422;
    return error;
  }
  if (options.cost.provider) {
    for (const suggest::RewritePair& p : *pairs) {
      options.cost.workload.push_back(p.original);
    }
  }
  // One suggestion runs at a time; a few more may wait.
  if (suggest_waiting_.fetch_add(1) > config_.suggest_queue) {
    suggest_waiting_.fetch_sub(1);
    return ErrorResponse(503, "Busy", "too many suggestion requests queued");
  }
  std::lock_guard<std::mutex> lock(suggest_mu_);
  suggest::SuggestStats partial;
  absl::StatusOr<suggest::SuggestReport> report =
      suggest::SuggestRules(*pairs, options, &partial);
  suggest_waiting_.fetch_sub(1);
  if (!report.ok()) {
    ApiResponse error = ErrorResponse(report.status());
    if (KindOf(report.status()) == ErrorKind::kBudgetExceeded) {
      error.body["stats"] = suggest::StatsToJson(partial);
    }
    return error;
  }
  nlohmann::json body = suggest::ReportToJson(*report);
  for (nlohmann::json& rule : body["rules"]) {
    // Suggestions are not stored; the client posts the ones it keeps.
    rule["id"] = nullptr;
    std::string text = rule["pattern"].get<std::string>() + " --> " +
                       rule["replacement"].get<std::string>();
    rule["text"] = text;
  }
  body["strategy"] = suggest::StrategyName(options.explorer);
  return {200, body};
}

ApiResponse Api::CreateRule(const nlohmann::json& body) {
  std::shared_ptr<const StoreState> state = store_->Snapshot();
  int64_t workspace = kDefaultWorkspace;
  try {
    workspace = body.value("workspace", kDefaultWorkspace);
  } catch (const nlohmann::json::exception& e) {
    return ErrorResponse(400, "InvalidArgument", e.what());
  }
  if (!state->workspaces.count(workspace)) {
    return NotFound("no workspace " + std::to_string(workspace));
  }
  absl::StatusOr<varsql::Rule> rule =
      varsql::RuleFromJson(body, DialectFor(*state, workspace));
  if (!rule.ok()) {
    absl::Status s = rule.status();
    if (HttpStatusFor(s) != 400) {
      return ErrorResponse(400, ErrorKindName(KindOf(s)),
                           std::string(s.message()));
    }
    return ErrorResponse(s);
  }
  absl::StatusOr<varsql::Rule> created = store_->CreateRule(*rule);
  if (!created.ok()) return ErrorResponse(created.status());
  return {201, RuleResource(*created)};
}

ApiResponse Api::UpdateRule(int64_t id, const nlohmann::json& body) {
  std::shared_ptr<const StoreState> state = store_->Snapshot();
  auto it = state->rules.find(id);
  if (it == state->rules.end()) {
    return NotFound("no rule " + std::to_string(id));
  }
  if (body.contains("id") && !body["id"].is_null() &&
      body["id"] != nlohmann::json(id)) {
    return ErrorResponse(409, "Conflict", "rule id cannot change");
  }
  // Fields not in the body keep their stored values.
  nlohmann::json merged = varsql::RuleToJson(it->second);
  if (body.contains("rule")) {
    for (const char* key : {"pattern", "replacement", "constraints",
                            "actions"}) {
      merged.erase(key);
    }
  }
  for (const auto& [key, value] : body.items()) merged[key] = value;
  merged["id"] = id;
  int64_t workspace = kDefaultWorkspace;
  try {
    workspace = merged.value("workspace", kDefaultWorkspace);
  } catch (const nlohmann::json::exception& e) {
    return ErrorResponse(400, "InvalidArgument", e.what());
  }
  if (!state->workspaces.count(workspace)) {
    return NotFound("no workspace " + std::to_string(workspace));
  }
  // Stored text is generic SQL; only new text is read in the workspace's
  // dialect.
  bool new_text = body.contains("rule") || body.contains("pattern") ||
                  body.contains("replacement") ||
                  body.contains("constraints") || body.contains("actions");
  sql::Dialect dialect = new_text ? DialectFor(*state, workspace)
                                  : sql::Dialect::kGeneric;
  absl::StatusOr<varsql::Rule> rule = varsql::RuleFromJson(merged, dialect);
  if (!rule.ok()) {
    return ErrorResponse(400, ErrorKindName(KindOf(rule.status())),
                         std::string(rule.status().message()));
  }
  absl::StatusOr<varsql::Rule> updated = store_->UpdateRule(*rule);
  if (!updated.ok()) return ErrorResponse(updated.status());
  return {200, RuleResource(*updated)};
}

ApiResponse Api::Rules(const std::string& method, const std::string& rest,
                       const nlohmann::json& body,
                       const std::map<std::string, std::string>& query) {
  if (rest.empty()) {
    if (method == "GET") {
      std::shared_ptr<const StoreState> state = store_->Snapshot();
      std::optional<int64_t> workspace;
      auto it = query.find("workspace");
      if (it != query.end()) {
        int64_t ws = 0;
        if (!ParseId(it->second, &ws)) {
          return ErrorResponse(400, "InvalidArgument", "bad workspace id");
        }
        workspace = ws;
      }
      nlohmann::json rules = nlohmann::json::array();
      for (const auto& [id, rule] : state->rules) {
        if (workspace && rule.workspace != *workspace) continue;
        rules.push_back(RuleResource(rule));
      }
      return {200, {{"rules", rules}}};
    }
    if (method == "POST") return CreateRule(body);
    return MethodNotAllowed();
  }
  auto [id_text, action] = Head(rest);
  int64_t id = 0;
  if (!ParseId(id_text, &id)) return NotFound("no rule " + id_text);
  if (!action.empty()) {
    if (method != "POST" || (action != "enable" && action != "disable")) {
      return NotFound("no route for rule action " + action);
    }
    return UpdateRule(id, {{"enabled", action == "enable"}});
  }
  if (method == "GET") {
    std::shared_ptr<const StoreState> state = store_->Snapshot();
    auto it = state->rules.find(id);
    if (it == state->rules.end()) {
      return NotFound("no rule " + std::to_string(id));
    }
    return {200, RuleResource(it->second)};
  }
  if (method == "PUT") return UpdateRule(id, body);
  if (method == "DELETE") {
    absl::Status s = store_->DeleteRule(id);
    if (!s.ok()) return ErrorResponse(s);
    return {200, {{"deleted", id}}};
  }
  return MethodNotAllowed();
}

ApiResponse Api::Workspaces(const std::string& method, const std::string& rest,
                            const nlohmann::json& body) {
  if (rest.empty()) {
    if (method == "GET") {
      std::shared_ptr<const StoreState> state = store_->Snapshot();
      nlohmann::json list = nlohmann::json::array();
      for (const auto& [id, ws] : state->workspaces) {
        list.push_back(WorkspaceToJson(ws, *state));
      }
      return {200, {{"workspaces", list}}};
    }
    if (method == "POST") {
      absl::StatusOr<Workspace> ws = WorkspaceFromJson(body);
      if (!ws.ok()) return ErrorResponse(ws.status());
      absl::StatusOr<Workspace> created = store_->CreateWorkspace(*ws);
      if (!created.ok()) return ErrorResponse(created.status());
      return {201, WorkspaceToJson(*created, *store_->Snapshot())};
    }
    return MethodNotAllowed();
  }
  auto [id_text, action] = Head(rest);
  int64_t id = 0;
  if (!ParseId(id_text, &id)) return NotFound("no workspace " + id_text);
  if (action == "rules") {
    // Moves a stored rule into this workspace.
    if (method != "POST") return MethodNotAllowed();
    if (!body.contains("rule_id") || !body["rule_id"].is_number_integer()) {
      return ErrorResponse(400, "InvalidArgument",
                           "'rule_id' must be an integer");
    }
    std::shared_ptr<const StoreState> state = store_->Snapshot();
    if (!state->workspaces.count(id)) {
      return NotFound("no workspace " + std::to_string(id));
    }
    return UpdateRule(body["rule_id"].get<int64_t>(), {{"workspace", id}});
  }
  if (!action.empty()) return NotFound("no route for " + action);
  if (method == "GET") {
    std::shared_ptr<const StoreState> state = store_->Snapshot();
    auto it = state->workspaces.find(id);
    if (it == state->workspaces.end()) {
      return NotFound("no workspace " + std::to_string(id));
    }
    return {200, WorkspaceToJson(it->second, *state)};
  }
  if (method == "PUT") {
    absl::StatusOr<Workspace> ws = WorkspaceFromJson(body);
    if (!ws.ok()) return ErrorResponse(ws.status());
    if (ws->id != 0 && ws->id != id) {
      return ErrorResponse(409, "Conflict", "workspace id cannot change");
    }
    ws->id = id;
    absl::StatusOr<Workspace> updated = store_->UpdateWorkspace(*ws);
    if (!updated.ok()) return ErrorResponse(updated.status());
    return {200, WorkspaceToJson(*updated, *store_->Snapshot())};
  }
  if (method == "DELETE") {
    absl::Status s = store_->DeleteWorkspace(id);
    if (!s.ok()) return ErrorResponse(s);
    return {200, {{"deleted", id}}};
  }
  return MethodNotAllowed();
}

}  // namespace qb::service
