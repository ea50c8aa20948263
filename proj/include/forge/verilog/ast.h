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

#ifndef FORGE_VERILOG_AST_H_
#define FORGE_VERILOG_AST_H_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "forge/verilog/lexer.h"

namespace forge::verilog {

// Structural equality on every AST node ignores spans so that a re-parsed
// pretty-print compares equal to the original tree.

enum class ExprKind {
  kIdentifier,   // text = name
  kNumber,       // text = literal as written
  kUnary,        // text = operator, args = {operand}
  kBinary,       // text = operator, args = {lhs, rhs}
  kTernary,      // args = {cond, then, else}
  kConcat,       // args = items
  kReplicate,    // args = {count, items...}
  kIndex,        // text = name, args = {index}
  kRangeSelect,  // text = name, args = {msb, lsb}
};

struct Expr {
  ExprKind kind = ExprKind::kNumber;
  std::string text;
  std::vector<Expr> args;
  Span span;

  static Expr identifier(std::string name) {
    return Expr{ExprKind::kIdentifier, std::move(name), {}, {}};
  }
  static Expr number(std::string literal) {
    return Expr{ExprKind::kNumber, std::move(literal), {}, {}};
  }
  static Expr unary(std::string op, Expr operand) {
    return Expr{ExprKind::kUnary, std::move(op), {std::move(operand)}, {}};
  }
  static Expr binary(std::string op, Expr lhs, Expr rhs) {
    return Expr{ExprKind::kBinary, std::move(op), {std::move(lhs), std::move(rhs)}, {}};
  }
  static Expr ternary(Expr cond, Expr a, Expr b) {
    return Expr{ExprKind::kTernary, "?:", {std::move(cond), std::move(a), std::move(b)}, {}};
  }
};

bool operator==(const Expr& a, const Expr& b);

struct Range {
  Expr msb;
  Expr lsb;
  Span span;
};

bool operator==(const Range& a, const Range& b);

enum class StmtKind {
  kBlock,
  kIf,
  kCase,
  kBlockingAssign,
  kNonblockingAssign,
  kNull,
};

struct CaseItem;

struct Stmt {
  StmtKind kind = StmtKind::kNull;
  Expr lhs;                     // assignments
  Expr rhs;                     // assignment value, if condition, case selector
  std::vector<Stmt> body;       // block statements; if: {then} or {then, else}
  std::vector<CaseItem> items;  // case
  std::string keyword;          // "case" / "casez" / "casex"; block label
  Span span;

  bool has_else() const { return kind == StmtKind::kIf && body.size() == 2; }
};

struct CaseItem {
  std::vector<Expr> labels;  // empty for default
  bool is_default = false;
  Stmt body;
  Span span;
};

bool operator==(const Stmt& a, const Stmt& b);
bool operator==(const CaseItem& a, const CaseItem& b);

enum class Direction { kNone, kInput, kOutput, kInout };
enum class NetType { kImplicit, kWire, kReg, kInteger };

std::string_view direction_name(Direction d);
std::string_view net_type_name(NetType t);

struct Declarator {
  std::string name;
  std::optional<Range> array;  // unpacked dimension, e.g. mem [0:15]
  std::optional<Expr> init;    // net declaration assignment
  Span name_span;
  Span span;
};

bool operator==(const Declarator& a, const Declarator& b);

// Port declarations (header or body) and net/variable declarations.
struct Declaration {
  Direction direction = Direction::kNone;
  NetType type = NetType::kImplicit;
  bool is_signed = false;
  std::optional<Range> range;
  std::vector<Declarator> names;
  Span span;
  Span keyword_span;  // direction keyword, or type keyword for net decls
  Span type_span;     // explicit wire/reg/integer keyword; empty when implicit

  bool is_port() const { return direction != Direction::kNone; }
};

bool operator==(const Declaration& a, const Declaration& b);

struct ParamAssign {
  std::string name;
  Expr value;
  Span span;
};

struct ParamDecl {
  bool local = false;
  std::optional<Range> range;
  std::vector<ParamAssign> params;
  Span span;
};

bool operator==(const ParamDecl& a, const ParamDecl& b);

struct Assignment {
  Expr lhs;
  Expr rhs;
  Span span;
};

struct ContinuousAssign {
  std::vector<Assignment> assigns;
  Span span;
};

bool operator==(const ContinuousAssign& a, const ContinuousAssign& b);

enum class Edge { kNone, kPosedge, kNegedge };

struct SensitivityItem {
  Edge edge = Edge::kNone;
  Expr signal;
};

struct Always {
  bool star = false;
  std::vector<SensitivityItem> sensitivity;
  Stmt body;
  Span span;

  bool edge_triggered() const {
    for (const auto& s : sensitivity) {
      if (s.edge != Edge::kNone) return true;
    }
    return false;
  }
};

bool operator==(const Always& a, const Always& b);

using ModuleItem = std::variant<Declaration, ParamDecl, ContinuousAssign, Always>;

Span item_span(const ModuleItem& item);

struct Module {
  std::string name;
  std::vector<ParamDecl> header_params;
  bool ansi = true;
  std::vector<Declaration> ansi_ports;  // ANSI header declarations
  std::vector<std::string> port_list;   // non-ANSI header names
  std::vector<ModuleItem> items;
  Span span;
  Span header_span;     // "module" through the header ';'
  Span port_list_span;  // between the header parentheses, exclusive

  // Port names in header order for either header style.
  std::vector<std::string> port_names() const;
};

bool operator==(const Module& a, const Module& b);

struct SourceUnit {
  std::string source;
  std::vector<Token> tokens;
  std::vector<Module> modules;
  std::vector<ParseDiagnostic> diagnostics;

  bool has_errors() const;
  size_t error_count() const;
};

}  // namespace forge::verilog

#endif  // FORGE_VERILOG_AST_H_
