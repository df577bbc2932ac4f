/*
 * Copyright 2026 The xdual Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef XDUAL_CLI_H_
#define XDUAL_CLI_H_

#include <ostream>
#include <span>
#include <string>

namespace xdual {

// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitInput = 3,
  kExitBudget = 4,
};

// Runs the command line `args` (args[0] is the program name) writing to
// `out` and `err`; returns the exit status.
int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err);

}  // namespace xdual

#endif  // XDUAL_CLI_H_
