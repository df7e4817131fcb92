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

#include "qb/service/store.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "qb/status.h"

namespace qb::service {

std::vector<int64_t> StoreState::RuleIds(int64_t workspace) const {
  std::vector<int64_t> ids;
  for (const auto& [id, rule] : rules) {
    if (rule.workspace == workspace) ids.push_back(id);
  }
  return ids;
}

std::vector<varsql::Rule> StoreState::RulesOf(int64_t workspace) const {
  std::vector<varsql::Rule> out;
  for (const auto& [id, rule] : rules) {
    if (rule.workspace == workspace) out.push_back(rule);
  }
  return out;
}

nlohmann::json WorkspaceToJson(const Workspace& ws, const StoreState& state) {
  nlohmann::json j = {{"id", ws.id}, {"name", ws.name}};
  if (ws.database) {
    j["database_binding"] = {{"dialect", sql::DialectName(ws.database->dialect)},
                             {"schema_path", ws.database->schema_path}};
  } else {
    j["database_binding"] = nullptr;
  }
  j["rule_ids"] = state.RuleIds(ws.id);
  return j;
}

absl::StatusOr<Workspace> WorkspaceFromJson(const nlohmann::json& j) {
  if (!j.is_object()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "workspace must be an object");
  }
  Workspace ws;
  try {
    ws.id = j.value("id", static_cast<int64_t>(0));
    ws.name = j.value("name", std::string());
    if (j.contains("database_binding") && !j["database_binding"].is_null()) {
      const nlohmann::json& b = j["database_binding"];
      if (!b.is_object()) {
        return MakeError(ErrorKind::kInvalidArgument,
                         "database_binding must be an object");
      }
      DatabaseBinding binding;
      absl::StatusOr<sql::Dialect> dialect =
          sql::ParseDialect(b.value("dialect", std::string("generic")));
      if (!dialect.ok()) return dialect.status();
      binding.dialect = *dialect;
      binding.schema_path = b.value("schema_path", std::string());
      ws.database = binding;
    }
  } catch (const nlohmann::json::exception& e) {
    return MakeError(ErrorKind::kInvalidArgument,
                     std::string("bad workspace field: ") + e.what());
  }
  return ws;
}

nlohmann::json StateToJson(const StoreState& state) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& [id, rule] : state.rules) {
    rules.push_back(varsql::RuleToJson(rule));
  }
  nlohmann::json workspaces = nlohmann::json::array();
  for (const auto& [id, ws] : state.workspaces) {
    nlohmann::json j = WorkspaceToJson(ws, state);
    j.erase("rule_ids");
    workspaces.push_back(std::move(j));
  }
  return {{"version", 1},
          {"next_rule_id", state.next_rule_id},
          {"next_workspace_id", state.next_workspace_id},
          {"workspaces", workspaces},
          {"rules", rules}};
}

absl::StatusOr<StoreState> StateFromJson(const nlohmann::json& j) {
  if (!j.is_object()) {
    return MakeError(ErrorKind::kInvalidArgument, "store must be an object");
  }
  StoreState state;
  try {
    state.next_rule_id = j.value("next_rule_id", static_cast<int64_t>(1));
    state.next_workspace_id =
        j.value("next_workspace_id", kDefaultWorkspace + 1);
  } catch (const nlohmann::json::exception& e) {
    return MakeError(ErrorKind::kInvalidArgument, e.what());
  }
  if (j.contains("workspaces")) {
    for (const auto& item : j["workspaces"]) {
      absl::StatusOr<Workspace> ws = WorkspaceFromJson(item);
      if (!ws.ok()) return ws.status();
      state.workspaces[ws->id] = *ws;
      state.next_workspace_id = std::max(state.next_workspace_id, ws->id + 1);
    }
  }
  if (!state.workspaces.count(kDefaultWorkspace)) {
    state.workspaces[kDefaultWorkspace] = {kDefaultWorkspace, "default", {}};
  }
  if (j.contains("rules")) {
    for (const auto& item : j["rules"]) {
      absl::StatusOr<varsql::Rule> rule = varsql::RuleFromJson(item);
      if (!rule.ok()) return rule.status();
      if (rule->id <= 0 || state.rules.count(rule->id)) {
        return MakeError(ErrorKind::kConflict,
                         "bad or duplicate rule id in store");
      }
      state.rules[rule->id] = *rule;
      state.next_rule_id = std::max(state.next_rule_id, rule->id + 1);
    }
  }
  return state;
}

void LoadSchemas(StoreState* state) {
  state->schemas.clear();
  for (const auto& [id, ws] : state->workspaces) {
    if (!ws.database || ws.database->schema_path.empty()) continue;
    absl::StatusOr<sql::SchemaCatalog> schema =
        sql::SchemaCatalog::FromFile(ws.database->schema_path);
    if (schema.ok()) {
      state->schemas[id] =
          std::make_shared<const sql::SchemaCatalog>(std::move(*schema));
    }
  }
}

absl::Status WriteFileAtomically(const std::string& path,
                                 const std::string& contents) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return MakeError(ErrorKind::kIo, "cannot write " + tmp);
    out << contents;
    out.flush();
    if (!out) return MakeError(ErrorKind::kIo, "cannot write " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    return MakeError(ErrorKind::kIo, "cannot replace " + path);
  }
  return absl::OkStatus();
}

RuleStore::RuleStore(std::string path) : path_(std::move(path)) {}

absl::StatusOr<std::unique_ptr<RuleStore>> RuleStore::Open(
    const std::string& path) {
  std::unique_ptr<RuleStore> store(new RuleStore(path));
  auto state = std::make_shared<StoreState>();
  std::ifstream in(path);
  if (!path.empty() && in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json doc = nlohmann::json::parse(buffer.str(), nullptr, false);
    if (doc.is_discarded()) {
      return MakeError(ErrorKind::kIo, "store file is not JSON: " + path);
    }
    absl::StatusOr<StoreState> loaded = StateFromJson(doc);
    if (!loaded.ok()) return loaded.status();
    *state = std::move(*loaded);
  } else {
    state->workspaces[kDefaultWorkspace] = {kDefaultWorkspace, "default", {}};
  }
  LoadSchemas(state.get());
  store->state_ = std::move(state);
  return store;
}

std::shared_ptr<const StoreState> RuleStore::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return state_;
}

// Caller holds mu_.
absl::Status RuleStore::Commit(std::shared_ptr<StoreState> next) {
  if (!path_.empty()) {
    absl::Status written =
        WriteFileAtomically(path_, StateToJson(*next).dump(2) + "\n");
    if (!written.ok()) return written;
  }
  state_ = std::move(next);
  return absl::OkStatus();
}

absl::StatusOr<varsql::Rule> RuleStore::CreateRule(varsql::Rule rule) {
  std::lock_guard<std::mutex> lock(mu_);
  auto next = std::make_shared<StoreState>(*state_);
  if (!next->workspaces.count(rule.workspace)) {
    return MakeError(ErrorKind::kNotFound,
                     "no workspace " + std::to_string(rule.workspace));
  }
  if (rule.id == 0) {
    rule.id = next->next_rule_id;
  } else if (rule.id < 0 || next->rules.count(rule.id) ||
             rule.id < next->next_rule_id) {
    // Ids are never reused, including ids of deleted rules.
    return MakeError(ErrorKind::kConflict,
                     "rule id " + std::to_string(rule.id) + " is taken");
  }
  next->next_rule_id = std::max(next->next_rule_id, rule.id + 1);
  next->rules[rule.id] = rule;
  absl::Status s = Commit(std::move(next));
  if (!s.ok()) return s;
  return rule;
}

absl::StatusOr<varsql::Rule> RuleStore::UpdateRule(varsql::Rule rule) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!state_->rules.count(rule.id)) {
    return MakeError(ErrorKind::kNotFound,
                     "no rule " + std::to_string(rule.id));
  }
  if (!state_->workspaces.count(rule.workspace)) {
    return MakeError(ErrorKind::kNotFound,
                     "no workspace " + std::to_string(rule.workspace));
  }
  auto next = std::make_shared<StoreState>(*state_);
  next->rules[rule.id] = rule;
  absl::Status s = Commit(std::move(next));
  if (!s.ok()) return s;
  return rule;
}

absl::Status RuleStore::DeleteRule(int64_t id) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!state_->rules.count(id)) {
    return MakeError(ErrorKind::kNotFound, "no rule " + std::to_string(id));
  }
  auto next = std::make_shared<StoreState>(*state_);
  next->rules.erase(id);
  return Commit(std::move(next));
}

absl::StatusOr<Workspace> RuleStore::CreateWorkspace(Workspace ws) {
  std::lock_guard<std::mutex> lock(mu_);
  auto next = std::make_shared<StoreState>(*state_);
  if (ws.id == 0) {
    ws.id = next->next_workspace_id;
  } else if (ws.id < 0 || next->workspaces.count(ws.id) ||
             ws.id < next->next_workspace_id) {
    return MakeError(ErrorKind::kConflict,
                     "workspace id " + std::to_string(ws.id) + " is taken");
  }
  if (ws.name.empty()) ws.name = "workspace " + std::to_string(ws.id);
  next->next_workspace_id = std::max(next->next_workspace_id, ws.id + 1);
  next->workspaces[ws.id] = ws;
  LoadSchemas(next.get());
  absl::Status s = Commit(std::move(next));
  if (!s.ok()) return s;
  return ws;
}

absl::StatusOr<Workspace> RuleStore::UpdateWorkspace(Workspace ws) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!state_->workspaces.count(ws.id)) {
    return MakeError(ErrorKind::kNotFound,
                     "no workspace " + std::to_string(ws.id));
  }
  auto next = std::make_shared<StoreState>(*state_);
  if (ws.name.empty()) ws.name = next->workspaces[ws.id].name;
  next->workspaces[ws.id] = ws;
  LoadSchemas(next.get());
  absl::Status s = Commit(std::move(next));
  if (!s.ok()) return s;
  return ws;
}

absl::Status RuleStore::DeleteWorkspace(int64_t id) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!state_->workspaces.count(id)) {
    return MakeError(ErrorKind::kNotFound,
                     "no workspace " + std::to_string(id));
  }
  if (id == kDefaultWorkspace) {
    return MakeError(ErrorKind::kConflict,
                     "the default workspace cannot be deleted");
  }
  if (!state_->RuleIds(id).empty()) {
    return MakeError(ErrorKind::kConflict, "workspace still holds rules");
  }
  auto next = std::make_shared<StoreState>(*state_);
  next->workspaces.erase(id);
  next->schemas.erase(id);
  return Commit(std::move(next));
}

}  // namespace qb::service
