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

#ifndef QB_SERVICE_CONFIG_H_
#define QB_SERVICE_CONFIG_H_

#include <cstdint>
#include <functional>
#include <string>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "qb/sql/ast.h"

namespace qb::service {

struct ServiceConfig {
  std::string listen_addr = "127.0.0.1:8080";
  std::string store_path = "qb_store.json";
  sql::Dialect default_dialect = sql::Dialect::kGeneric;
  int64_t suggest_budget_ms = 10000;
  int max_steps = 64;
  // Suggestion requests allowed to wait behind the running one.
  int suggest_queue = 4;
  // Static web UI files served under /ui; empty disables it.
  std::string ui_dir;
};

// Returns nullptr for unset variables.
using EnvLookup = std::function<const char*(const char*)>;

absl::StatusOr<ServiceConfig> ConfigFromJson(const nlohmann::json& json,
                                             ServiceConfig base = {});
nlohmann::json ConfigToJson(const ServiceConfig& config);

// QB_LISTEN_ADDR, QB_STORE_PATH, QB_DEFAULT_DIALECT, QB_SUGGEST_BUDGET_MS,
// QB_MAX_STEPS, QB_SUGGEST_QUEUE and QB_UI_DIR override file values.
absl::StatusOr<ServiceConfig> ApplyEnv(ServiceConfig config,
                                       const EnvLookup& env);

// Reads the file (if `path` is not empty), then applies the environment.
absl::StatusOr<ServiceConfig> LoadConfig(const std::string& path,
                                         const EnvLookup& env);
absl::StatusOr<ServiceConfig> LoadConfig(const std::string& path);

// Splits "host:port".
absl::Status SplitListenAddr(const std::string& addr, std::string* host,
                             int* port);

}  // namespace qb::service

#endif  // QB_SERVICE_CONFIG_H_
