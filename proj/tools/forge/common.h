// Copyright 2026 The Forge Authors
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


#ifndef FORGE_TOOLS_FORGE_COMMON_H_
#define FORGE_TOOLS_FORGE_COMMON_H_

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

#include "forge/validation/harness.h"

namespace forge::cli {

using ordered_json = nlohmann::ordered_json;

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitStage = 2, kExitTool = 3 };

struct Globals {
  bool json = false;
  int exit_code = kExitOk;
};

// Prints `j` (with --json) or `text`.
void emit(const Globals& g, const ordered_json& j, const std::string& text);

// --config, then $FORGE_TOOLS, then built-in defaults.
validation::ToolConfig load_tools(const std::string& flag);
std::filesystem::path tools_path(const std::string& flag);

// 1-based line and column of a byte offset.
std::pair<size_t, size_t> line_col(const std::string& text, size_t offset);

// Throws Error(kInvalidArgument) so usage mistakes map to exit code 1.
[[noreturn]] void usage(const std::string& msg);

void add_verilog_commands(CLI::App& app, Globals& g);
void add_model_commands(CLI::App& app, Globals& g);
void add_screen_commands(CLI::App& app, Globals& g);

}  // namespace forge::cli

#endif  // FORGE_TOOLS_FORGE_COMMON_H_
