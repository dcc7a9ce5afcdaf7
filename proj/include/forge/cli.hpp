/* Copyright 2026 The Forge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef FORGE_CLI_HPP_
#define FORGE_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace forge::cli {

// Runs one forge invocation. `args` excludes the program name. Every
// successful run prints a machine-readable JSON report to `out` (or the
// --report file) and a one-line human summary to `err`.
//
// Exit codes: 0 success, 1 validation/input error, 2 transport error,
// 64 unknown or missing subcommand.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace forge::cli

#endif  // FORGE_CLI_HPP_
