// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS link-level simulator
// Copyright (C) 2026 The nfris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef NFRIS_TOOLS_CLI_HPP
#define NFRIS_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace nfris
{

/**
 * Entry point of the `nfris` tool. `args` excludes the program name. Returns 0 on success, 1 on
 * configuration or runtime errors and 2 on usage errors; diagnostics go to `err`.
 */
int cli_dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

int cli_dispatch(int argc, char **argv);

} // namespace nfris

#endif
