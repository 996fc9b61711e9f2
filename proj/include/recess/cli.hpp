/*
 * Copyright 2026 The Recess Authors.
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

#ifndef RECESS_CLI_HPP_
#define RECESS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace recess {

// Runs the `recess` command line. `args` excludes the program name.
// Exit codes: 0 success, 1 runtime failure, 2 usage or parameter error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace recess

#endif  // RECESS_CLI_HPP_
