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

#ifndef QB_SERVICE_STORE_H_
#define QB_SERVICE_STORE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "qb/sql/ast.h"
#include "qb/sql/schema.h"
#include "qb/varsql/rule.h"

namespace qb::service {

inline constexpr int64_t kDefaultWorkspace = 1;

struct DatabaseBinding {
  sql::Dialect dialect = sql::Dialect::kGeneric;
  std::string schema_path;
};

struct Workspace {
  int64_t id = 0;
  std::string name;
  std::optional<DatabaseBinding> database;
};

// One immutable version of the store. Rule membership in a workspace is the
// rule's `workspace` field.
struct StoreState {
  std::map<int64_t, varsql::Rule> rules;
  std::map<int64_t, Workspace> workspaces;
  int64_t next_rule_id = 1;
  int64_t next_workspace_id = kDefaultWorkspace + 1;
  // Schemas loaded from workspace bindings, keyed by workspace id.
  std::map<int64_t, std::shared_ptr<const sql::SchemaCatalog>> schemas;

  std::vector<int64_t> RuleIds(int64_t workspace) const;
  // Enabled and disabled rules of one workspace.
  std::vector<varsql::Rule> RulesOf(int64_t workspace) const;
};

nlohmann::json WorkspaceToJson(const Workspace& ws, const StoreState& state);
absl::StatusOr<Workspace> WorkspaceFromJson(const nlohmann::json& json);

// The on-disk document.
nlohmann::json StateToJson(const StoreState& state);
absl::StatusOr<StoreState> StateFromJson(const nlohmann::json& json);

// Rules and workspaces persisted to one JSON file. Readers take a snapshot;
// each mutation builds a new state, writes it to a temporary file, renames
// it over the old one and then publishes it.
class RuleStore {
 public:
  // An empty path keeps the store in memory only. A missing file starts an
  // empty store with the default workspace.
  static absl::StatusOr<std::unique_ptr<RuleStore>> Open(
      const std::string& path);

  std::shared_ptr<const StoreState> Snapshot() const;
  const std::string& path() const { return path_; }

  // Assigns an id when rule.id is 0; Conflict when the id is taken.
  absl::StatusOr<varsql::Rule> CreateRule(varsql::Rule rule);
  absl::StatusOr<varsql::Rule> UpdateRule(varsql::Rule rule);
  absl::Status DeleteRule(int64_t id);

  absl::StatusOr<Workspace> CreateWorkspace(Workspace ws);
  absl::StatusOr<Workspace> UpdateWorkspace(Workspace ws);
  // Conflict for the default workspace or one that still holds rules.
  absl::Status DeleteWorkspace(int64_t id);

 private:
  explicit RuleStore(std::string path);
  absl::Status Commit(std::shared_ptr<StoreState> next);

  std::string path_;
  mutable std::mutex mu_;
  std::shared_ptr<const StoreState> state_;
};

// Reloads the schema files named by workspace bindings.
void LoadSchemas(StoreState* state);

absl::Status WriteFileAtomically(const std::string& path,
                                 const std::string& contents);

}  // namespace qb::service

#endif  // QB_SERVICE_STORE_H_
