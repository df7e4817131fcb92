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

#ifndef QB_SERVICE_SERVER_H_
#define QB_SERVICE_SERVER_H_

#include <memory>
#include <string>

#include "absl/status/status.h"
#include "qb/service/api.h"

namespace httplib {
class Server;
}

namespace qb::service {

// Serves an Api over HTTP.
class Server {
 public:
  explicit Server(Api* api);
  ~Server();

  // Port 0 picks a free port.
  absl::Status Bind(const std::string& host, int port);
  int port() const { return port_; }
  // Serves files from `dir` under /ui. Fails if `dir` is not a directory.
  absl::Status MountUi(const std::string& dir);

  // Blocks until Stop is called.
  absl::Status Run();
  void Stop();
  // Waits until the listener accepts connections.
  void WaitUntilReady() const;

 private:
  Api* api_;
  std::unique_ptr<httplib::Server> http_;
  int port_ = 0;
};

}  // namespace qb::service

#endif  // QB_SERVICE_SERVER_H_
