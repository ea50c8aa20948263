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

#ifndef FORGE_VERILOG_PRINTER_H_
#define FORGE_VERILOG_PRINTER_H_

#include <string>
#include <vector>

#include "forge/verilog/ast.h"

namespace forge::verilog {

// Canonical pretty-printer. Nested binary and ternary operands are always
// parenthesized, so parse(print(m)) is structurally equal to m.
std::string print_expr(const Expr& e);
std::string print_stmt(const Stmt& s, int indent = 0);
std::string print_module(const Module& m);
std::string print_modules(const std::vector<Module>& modules);

}  // namespace forge::verilog

#endif  // FORGE_VERILOG_PRINTER_H_
