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

#ifndef FORGE_VERILOG_PARSER_H_
#define FORGE_VERILOG_PARSER_H_

#include <string_view>

#include "forge/verilog/ast.h"

namespace forge::verilog {

// Parses the supported Verilog subset. Never throws on malformed input:
// problems become Error diagnostics and the AST holds whatever parsed.
SourceUnit parse(std::string_view source);

}  // namespace forge::verilog

#endif  // FORGE_VERILOG_PARSER_H_
