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

#ifndef FORGE_VERILOG_SEMANTIC_H_
#define FORGE_VERILOG_SEMANTIC_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/verilog/ast.h"

namespace forge::verilog {

struct Literal {
  uint64_t value = 0;
  int width = 32;  // sized literals carry their size; unsized default to 32
  bool sized = false;
  bool has_unknown = false;  // contained x/z/? digits (mapped to 0)
};

// Parses a Verilog integer literal ("12", "4'b10_10", "'hff", "8'sd3").
std::optional<Literal> parse_literal(std::string_view text);

using ParamMap = std::map<std::string, uint64_t>;

// Evaluates a constant expression over literals and parameters.
std::optional<uint64_t> eval_const(const Expr& e, const ParamMap& params);

enum class SymbolKind { kPort, kNet, kParam };

struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::kNet;
  Direction direction = Direction::kNone;
  NetType type = NetType::kImplicit;
  const Range* range = nullptr;        // packed range, when declared
  const Range* array = nullptr;        // unpacked dimension, when declared
  Span decl_span;                      // name token of the first declaration
  int order = 0;                       // declaration order within the module
  bool is_variable() const {
    return type == NetType::kReg || type == NetType::kInteger;
  }
};

// Declaration bookkeeping for one module.
struct SymbolTable {
  std::map<std::string, Symbol> symbols;
  ParamMap params;

  const Symbol* find(const std::string& name) const {
    auto it = symbols.find(name);
    return it == symbols.end() ? nullptr : &it->second;
  }
  // Names in declaration order.
  std::vector<const Symbol*> ordered() const;
};

// Builds the symbol table, reporting duplicate declarations into `diags`.
SymbolTable build_symbols(const Module& m, std::vector<ParseDiagnostic>* diags);

// Declaration and driver checks beyond the grammar: undeclared identifiers,
// redeclarations, port-direction consistency, net/variable assignment
// contexts and conflicting continuous drivers.
std::vector<ParseDiagnostic> check_declarations(const SourceUnit& unit);

// Grammar diagnostics plus declaration diagnostics. This is the internal
// stand-in for an external compiler run.
struct FrontendCheck {
  SourceUnit unit;
  std::vector<ParseDiagnostic> declaration_diagnostics;

  bool ok() const {
    return !unit.has_errors() && declaration_diagnostics.empty();
  }
  std::string summary() const;
};

FrontendCheck check_source(std::string_view source);

// Visits every identifier referenced by an expression (including selects).
void for_each_identifier(const Expr& e,
                         const std::function<void(const std::string&, const Expr&)>& fn);

// Visits every statement in a tree, pre-order.
void for_each_stmt(const Stmt& s, const std::function<void(const Stmt&)>& fn);

// Base identifier of an assignment target; concatenation targets yield
// several names.
std::vector<std::string> lvalue_names(const Expr& lhs);

}  // namespace forge::verilog

#endif  // FORGE_VERILOG_SEMANTIC_H_
