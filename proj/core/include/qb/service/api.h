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

#ifndef QB_SERVICE_API_H_
#define QB_SERVICE_API_H_

#include <atomic>
#include <map>
#include <mutex>
#include <string>

#include "absl/status/status.h"
#include "json.hpp"
#include "qb/service/config.h"
#include "qb/service/store.h"

namespace qb::service {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// {error, detail} with the HTTP status matching the error kind.
ApiResponse ErrorResponse(const absl::Status& status);
ApiResponse ErrorResponse(int http_status, const std::string& error,
                          const std::string& detail);
int HttpStatusFor(const absl::Status& status);

// The REST API without the transport. Paths and methods are those served
// over HTTP; `query` holds URL query parameters.
class Api {
 public:
  Api(RuleStore* store, ServiceConfig config);

  ApiResponse Handle(const std::string& method, const std::string& path,
                     const std::string& body,
                     const std::map<std::string, std::string>& query = {});

  // POST /api/v1/rewrite {sql, workspace?, explain?, dialect?}
  ApiResponse Rewrite(const nlohmann::json& request);
  // POST /api/v1/suggest {pairs, strategy?, params?, dialect?}
  ApiResponse Suggest(const nlohmann::json& request);

  const ServiceConfig& config() const { return config_; }

 private:
  ApiResponse Rules(const std::string& method, const std::string& rest,
                    const nlohmann::json& body,
                    const std::map<std::string, std::string>& query);
  ApiResponse Workspaces(const std::string& method, const std::string& rest,
                         const nlohmann::json& body);
  ApiResponse CreateRule(const nlohmann::json& body);
  ApiResponse UpdateRule(int64_t id, const nlohmann::json& body);
  sql::Dialect DialectFor(const StoreState& state, int64_t workspace) const;

  RuleStore* store_;
  ServiceConfig config_;
  std::mutex suggest_mu_;
  std::atomic<int> suggest_waiting_{0};
};

// A rule as returned by the API: the stored fields plus its one-line text.
nlohmann::json RuleResource(const varsql::Rule& rule);

}  // namespace qb::service

#endif  // QB_SERVICE_API_H_
