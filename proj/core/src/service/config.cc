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

#include "qb/service/config.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "absl/strings/numbers.h"
#include "qb/status.h"

namespace qb::service {
namespace {

absl::Status ConfigError(const std::string& message) {
  return MakeError(ErrorKind::kInvalidArgument, "config: " + message);
}

absl::Status CheckRanges(const ServiceConfig& c) {
  if (c.suggest_budget_ms <= 0) {
    return ConfigError("suggest_budget_ms must be positive");
  }
  if (c.max_steps <= 0) return ConfigError("max_steps must be positive");
  if (c.suggest_queue < 0) return ConfigError("suggest_queue is negative");
  std::string host;
  int port = 0;
  return SplitListenAddr(c.listen_addr, &host, &port);
}

}  // namespace

absl::Status SplitListenAddr(const std::string& addr, std::string* host,
                             int* port) {
  size_t colon = addr.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    return ConfigError("listen_addr must be host:port");
  }
  *host = addr.substr(0, colon);
  std::string digits = addr.substr(colon + 1);
  if (!absl::SimpleAtoi(digits, port) || *port < 0 || *port > 65535) {
    return ConfigError("bad port in listen_addr");
  }
  return absl::OkStatus();
}

absl::StatusOr<ServiceConfig> ConfigFromJson(const nlohmann::json& j,
                                             ServiceConfig c) {
  if (!j.is_object()) return ConfigError("must be a JSON object");
  try {
    c.listen_addr = j.value("listen_addr", c.listen_addr);
    c.store_path = j.value("store_path", c.store_path);
    if (j.contains("default_dialect")) {
      absl::StatusOr<sql::Dialect> d =
          sql::ParseDialect(j["default_dialect"].get<std::string>());
      if (!d.ok()) return ConfigError(std::string(d.status().message()));
      c.default_dialect = *d;
    }
    c.suggest_budget_ms = j.value("suggest_budget_ms", c.suggest_budget_ms);
    c.max_steps = j.value("max_steps", c.max_steps);
    c.suggest_queue = j.value("suggest_queue", c.suggest_queue);
    c.ui_dir = j.value("ui_dir", c.ui_dir);
  } catch (const nlohmann::json::exception& e) {
    return ConfigError(e.what());
  }
  absl::Status ok = CheckRanges(c);
  if (!ok.ok()) return ok;
  return c;
}

nlohmann::json ConfigToJson(const ServiceConfig& c) {
  return {{"listen_addr", c.listen_addr},
          {"store_path", c.store_path},
          {"default_dialect", sql::DialectName(c.default_dialect)},
          {"suggest_budget_ms", c.suggest_budget_ms},
          {"max_steps", c.max_steps},
          {"suggest_queue", c.suggest_queue},
          {"ui_dir", c.ui_dir}};
}

absl::StatusOr<ServiceConfig> ApplyEnv(ServiceConfig c, const EnvLookup& env) {
  if (const char* v = env("QB_LISTEN_ADDR")) c.listen_addr = v;
  if (const char* v = env("QB_STORE_PATH")) c.store_path = v;
  if (const char* v = env("QB_DEFAULT_DIALECT")) {
    absl::StatusOr<sql::Dialect> d = sql::ParseDialect(v);
    if (!d.ok()) return ConfigError(std::string(d.status().message()));
    c.default_dialect = *d;
  }
  if (const char* v = env("QB_SUGGEST_BUDGET_MS")) {
    if (!absl::SimpleAtoi(v, &c.suggest_budget_ms)) {
      return ConfigError("QB_SUGGEST_BUDGET_MS is not a number");
    }
  }
  if (const char* v = env("QB_MAX_STEPS")) {
    if (!absl::SimpleAtoi(v, &c.max_steps)) {
      return ConfigError("QB_MAX_STEPS is not a number");
    }
  }
  if (const char* v = env("QB_SUGGEST_QUEUE")) {
    if (!absl::SimpleAtoi(v, &c.suggest_queue)) {
      return ConfigError("QB_SUGGEST_QUEUE is not a number");
    }
  }
  if (const char* v = env("QB_UI_DIR")) c.ui_dir = v;
  absl::Status ok = CheckRanges(c);
  if (!ok.ok()) return ok;
  return c;
}

absl::StatusOr<ServiceConfig> LoadConfig(const std::string& path,
                                         const EnvLookup& env) {
  ServiceConfig config;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) return MakeError(ErrorKind::kIo, "cannot read config " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json doc = nlohmann::json::parse(buffer.str(), nullptr, false);
    if (doc.is_discarded()) return ConfigError(path + " is not JSON");
    absl::StatusOr<ServiceConfig> parsed = ConfigFromJson(doc);
    if (!parsed.ok()) return parsed.status();
    config = *parsed;
  }
  return ApplyEnv(config, env);
}

absl::StatusOr<ServiceConfig> LoadConfig(const std::string& path) {
  return LoadConfig(path, [](const char* name) { return std::getenv(name); });
}

}  // namespace qb::service
