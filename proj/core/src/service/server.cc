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

#include "qb/service/server.h"

#include <map>

#include "httplib.h"
#include "qb/status.h"

namespace qb::service {

Server::Server(Api* api) : api_(api), http_(new httplib::Server) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [key, value] : req.params) query[key] = value;
    ApiResponse out = api_->Handle(req.method, req.path, req.body, query);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json; charset=utf-8");
  };
  const char* kAny = R"(/.*)";
  http_->Get(kAny, handler);
  http_->Post(kAny, handler);
  http_->Put(kAny, handler);
  http_->Delete(kAny, handler);
}

Server::~Server() { Stop(); }

absl::Status Server::Bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = http_->bind_to_any_port(host);
    if (port_ <= 0) {
      return MakeError(ErrorKind::kIo, "cannot bind " + host);
    }
    return absl::OkStatus();
  }
  if (!http_->bind_to_port(host, port)) {
    return MakeError(ErrorKind::kIo,
                     "cannot bind " + host + ":" + std::to_string(port));
  }
  port_ = port;
  return absl::OkStatus();
}

absl::Status Server::Run() {
  if (!http_->listen_after_bind()) {
    return MakeError(ErrorKind::kIo, "server stopped with an error");
  }
  return absl::OkStatus();
}

absl::Status Server::MountUi(const std::string& dir) {
  if (!http_->set_mount_point("/ui", dir)) {
    return MakeError(ErrorKind::kIo, "cannot serve UI from " + dir);
  }
  return absl::OkStatus();
}

void Server::Stop() {
  if (http_ && http_->is_running()) http_->stop();
}

void Server::WaitUntilReady() const { http_->wait_until_ready(); }

}  // namespace qb::service
