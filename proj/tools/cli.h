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

#ifndef QB_TOOLS_CLI_H_
#define QB_TOOLS_CLI_H_

#include <iosfwd>

namespace qb::cli {

enum ExitCode { kOk = 0, kUsage = 1, kIoError = 2, kConfigError = 3 };

// Runs the qb command line. Input SQL is read from `in` unless --in is given.
int Run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace qb::cli

#endif  // QB_TOOLS_CLI_H_
