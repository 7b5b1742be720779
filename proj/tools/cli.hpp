// Copyright 2026 The cohortig Authors.
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

#ifndef COHORTIG_TOOLS_CLI_HPP_
#define COHORTIG_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace cohortig::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitComputation = 4;

/// Runs the command line `args` (args[0] is the program name). Output files
/// named by --output are written directly; everything else goes to `out`,
/// and diagnostics plus the JSON error record to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cohortig::cli

#endif  // COHORTIG_TOOLS_CLI_HPP_
