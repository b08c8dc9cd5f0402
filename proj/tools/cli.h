/*
 * Copyright 2026 The hpca Authors.
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

// Command-line front end. Kept as a library so tests can drive it in-process.

#ifndef HPCA_TOOLS_CLI_H_
#define HPCA_TOOLS_CLI_H_

#include <ostream>

namespace hpca::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitProtocol = 3;

// Subcommands: simulate, role, compare, bench. Regular output goes to `out`,
// diagnostics and usage text to `err`.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace hpca::cli

#endif  // HPCA_TOOLS_CLI_H_
