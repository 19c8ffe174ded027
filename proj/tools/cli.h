// Copyright 2026 The lmr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LMR_TOOLS_CLI_H_
#define LMR_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace lmr::cli {

inline constexpr int kExitSGood = 0;
inline constexpr int kExitNotSGood = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitMalformed = 64;
inline constexpr int kExitRange = 65;
inline constexpr int kExitInternal = 70;

/// Runs the lmr command line with `args` (program name excluded). Results
/// go to --out when given, otherwise to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lmr::cli

#endif  // LMR_TOOLS_CLI_H_
