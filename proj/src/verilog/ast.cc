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

#include "forge/verilog/ast.h"

namespace forge::verilog {

bool operator==(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.text == b.text && a.args == b.args;
}

bool operator==(const Range& a, const Range& b) {
  return a.msb == b.msb && a.lsb == b.lsb;
}

bool operator==(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case StmtKind::kBlock:
      return a.body == b.body;
    case StmtKind::kIf:
      return a.rhs == b.rhs && a.body == b.body;
    case StmtKind::kCase:
      return a.keyword == b.keyword && a.rhs == b.rhs && a.items == b.items;
    case StmtKind::kBlockingAssign:
    case StmtKind::kNonblockingAssign:
      return a.lhs == b.lhs && a.rhs == b.rhs;
    case StmtKind::kNull:
      return true;
  }
  return false;
}

bool operator==(const CaseItem& a, const CaseItem& b) {
  return a.is_default == b.is_default && a.labels == b.labels &&
         a.body == b.body;
}

bool operator==(const Declarator& a, const Declarator& b) {
  return a.name == b.name && a.array == b.array && a.init == b.init;
}

bool operator==(const Declaration& a, const Declaration& b) {
  return a.direction == b.direction && a.type == b.type &&
         a.is_signed == b.is_signed && a.range == b.range && a.names == b.names;
}

bool operator==(const ParamDecl& a, const ParamDecl& b) {
  if (a.local != b.local || !(a.range == b.range) ||
      a.params.size() != b.params.size()) {
    return false;
  }
  for (size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].name != b.params[i].name ||
        !(a.params[i].value == b.params[i].value)) {
      return false;
    }
  }
  return true;
}

bool operator==(const ContinuousAssign& a, const ContinuousAssign& b) {
  if (a.assigns.size() != b.assigns.size()) return false;
  for (size_t i = 0; i < a.assigns.size(); ++i) {
    if (!(a.assigns[i].lhs == b.assigns[i].lhs) ||
        !(a.assigns[i].rhs == b.assigns[i].rhs)) {
      return false;
    }
  }
  return true;
}

bool operator==(const Always& a, const Always& b) {
  if (a.star != b.star || a.sensitivity.size() != b.sensitivity.size()) {
    return false;
  }
  for (size_t i = 0; i < a.sensitivity.size(); ++i) {
    if (a.sensitivity[i].edge != b.sensitivity[i].edge ||
        !(a.sensitivity[i].signal == b.sensitivity[i].signal)) {
      return false;
    }
  }
  return a.body == b.body;
}

bool operator==(const Module& a, const Module& b) {
  return a.name == b.name && a.header_params == b.header_params &&
         a.ansi == b.ansi && a.ansi_ports == b.ansi_ports &&
         a.port_list == b.port_list && a.items == b.items;
}

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::kNone: return "";
    case Direction::kInput: return "input";
    case Direction::kOutput: return "output";
    case Direction::kInout: return "inout";
  }
  return "";
}

std::string_view net_type_name(NetType t) {
  switch (t) {
    case NetType::kImplicit: return "";
    case NetType::kWire: return "wire";
    case NetType::kReg: return "reg";
    case NetType::kInteger: return "integer";
  }
  return "";
}

Span item_span(const ModuleItem& item) {
  return std::visit([](const auto& it) { return it.span; }, item);
}

std::vector<std::string> Module::port_names() const {
  if (!ansi) return port_list;
  std::vector<std::string> out;
  for (const auto& d : ansi_ports) {
    for (const auto& n : d.names) out.push_back(n.name);
  }
  return out;
}

bool SourceUnit::has_errors() const { return error_count() > 0; }

size_t SourceUnit::error_count() const {
  size_t n = 0;
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::kError) ++n;
  }
  return n;
}

}  // namespace forge::verilog
