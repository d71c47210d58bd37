// Copyright 2026 The pmimask Authors.
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

#ifndef PMIMASK_TOOLS_COMMANDS_H_
#define PMIMASK_TOOLS_COMMANDS_H_

namespace pmimask::cli {

// Entry point of the pmimask command-line tool; returns the exit code.
int Run(int argc, char** argv);

}  // namespace pmimask::cli

#endif  // PMIMASK_TOOLS_COMMANDS_H_
