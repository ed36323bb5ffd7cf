// Copyright 2026 The Triad Authors
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

#ifndef TRIAD_CLI_H_
#define TRIAD_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace triad::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,
  kVerificationFailure = 2,
  kIoError = 3,
};

// Entry point shared by the `triad` binary and the tests. `args[0]` is the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace triad::cli

#endif  // TRIAD_CLI_H_
