/* Copyright 2026 The laa3d-eval Authors. All Rights Reserved.

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

// Batch command-line front end. RunCli is the whole program minus the
// process boundary so tests can drive it in-process.

#ifndef LAA3D_TOOLS_CLI_H_
#define LAA3D_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace laa3d::cli {

inline constexpr char kToolkitVersion[] = "laa3d-eval 0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitPrecondition = 3;

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace laa3d::cli

#endif  // LAA3D_TOOLS_CLI_H_
