// Copyright 2026 The ghzsim Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ghzsim/config.hpp"
#include "ghzsim/errors.hpp"

namespace ghz {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitContract = 4;

int exit_code(ErrorKind kind);

const std::vector<std::string> &command_names();

/// Runs one subcommand and returns the rendered output in `config.output.format`.
/// Throws ghz::Error subclasses on failure.
std::string run_command(const std::string &command, const RunConfig &config);

/// Full command-line entry point. Writes results to `out` (or the configured file) and
/// diagnostics to `err`; returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace ghz
