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


#include <cstdlib>
#include <iostream>

#include "forge/pipeline/pipeline.h"
#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/kv_config.h"
#include "tools/forge/common.h"

namespace forge::cli {

void emit(const Globals& g, const ordered_json& j, const std::string& text) {
  if (g.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  }
}

std::filesystem::path tools_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("FORGE_TOOLS"); env && *env) return env;
  return {};
}

validation::ToolConfig load_tools(const std::string& flag) {
  const auto path = tools_path(flag);
  return path.empty() ? validation::ToolConfig::defaults() : validation::ToolConfig::load(path);
}

std::pair<size_t, size_t> line_col(const std::string& text, size_t offset) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void usage(const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); }

}  // namespace forge::cli

namespace {

int exit_code_for(const forge::Error& e) {
  if (e.code() == forge::ErrorCode::kToolUnavailable) return forge::cli::kExitTool;
  if (dynamic_cast<const forge::pipeline::StageError*>(&e)) return forge::cli::kExitStage;
  if (e.code() == forge::ErrorCode::kInvalidArgument) return forge::cli::kExitUsage;
  return forge::cli::kExitStage;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace forge::cli;
  CLI::App app{"Verilog contrastive-learning and screened-decoding toolkit", "forge"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable JSON output");
  add_verilog_commands(app, g);
  add_model_commands(app, g);
  add_screen_commands(app, g);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const forge::Error& e) {
    std::cerr << "forge: " << forge::error_code_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return kExitStage;
  }
  return g.exit_code;
}
