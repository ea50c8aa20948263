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

#include "forge/verilog/printer.h"

#include <sstream>

namespace forge::verilog {
namespace {

std::string operand(const Expr& e) {
  if (e.kind == ExprKind::kBinary || e.kind == ExprKind::kTernary) {
    return "(" + print_expr(e) + ")";
  }
  return print_expr(e);
}

std::string pad(int indent) { return std::string(2 * static_cast<size_t>(indent), ' '); }

std::string print_range(const Range& r) {
  return "[" + print_expr(r.msb) + ":" + print_expr(r.lsb) + "]";
}

std::string decl_head(const Declaration& d) {
  std::string out;
  auto add = [&](std::string_view w) {
    if (w.empty()) return;
    if (!out.empty()) out += ' ';
    out += w;
  };
  add(direction_name(d.direction));
  add(net_type_name(d.type));
  if (d.is_signed) add("signed");
  if (d.range) add(print_range(*d.range));
  return out;
}

std::string declarator(const Declarator& dn) {
  std::string out = dn.name;
  if (dn.array) out += " " + print_range(*dn.array);
  if (dn.init) out += " = " + print_expr(*dn.init);
  return out;
}

std::string param_list(const ParamDecl& p) {
  std::string out;
  for (size_t i = 0; i < p.params.size(); ++i) {
    if (i) out += ", ";
    out += p.params[i].name + " = " + print_expr(p.params[i].value);
  }
  return out;
}

void print_item(std::ostringstream& os, const ModuleItem& item) {
  if (const auto* d = std::get_if<Declaration>(&item)) {
    os << "  " << decl_head(*d) << ' ';
    for (size_t i = 0; i < d->names.size(); ++i) {
      if (i) os << ", ";
      os << declarator(d->names[i]);
    }
    os << ";\n";
  } else if (const auto* p = std::get_if<ParamDecl>(&item)) {
    os << "  " << (p->local ? "localparam" : "parameter");
    if (p->range) os << ' ' << print_range(*p->range);
    os << ' ' << param_list(*p) << ";\n";
  } else if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
    os << "  assign ";
    for (size_t i = 0; i < a->assigns.size(); ++i) {
      if (i) os << ", ";
      os << print_expr(a->assigns[i].lhs) << " = " << print_expr(a->assigns[i].rhs);
    }
    os << ";\n";
  } else if (const auto* al = std::get_if<Always>(&item)) {
    os << "  always @(";
    if (al->star) {
      os << '*';
    } else {
      for (size_t i = 0; i < al->sensitivity.size(); ++i) {
        if (i) os << " or ";
        const auto& s = al->sensitivity[i];
        if (s.edge == Edge::kPosedge) os << "posedge ";
        if (s.edge == Edge::kNegedge) os << "negedge ";
        os << print_expr(s.signal);
      }
    }
    os << ") ";
    std::string body = print_stmt(al->body, 1);
    // Drop the leading indentation of the first line; it follows ") ".
    os << body.substr(body.find_first_not_of(' '));
  }
}

}  // namespace

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kIdentifier:
    case ExprKind::kNumber:
      return e.text;
    case ExprKind::kUnary:
      if (e.args[0].kind == ExprKind::kUnary) {
        return e.text + "(" + print_expr(e.args[0]) + ")";
      }
      return e.text + operand(e.args[0]);
    case ExprKind::kBinary:
      return operand(e.args[0]) + " " + e.text + " " + operand(e.args[1]);
    case ExprKind::kTernary:
      return operand(e.args[0]) + " ? " + operand(e.args[1]) + " : " +
             operand(e.args[2]);
    case ExprKind::kConcat: {
      std::string out = "{";
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += print_expr(e.args[i]);
      }
      return out + "}";
    }
    case ExprKind::kReplicate: {
      std::string out = "{" + print_expr(e.args[0]) + "{";
      for (size_t i = 1; i < e.args.size(); ++i) {
        if (i > 1) out += ", ";
        out += print_expr(e.args[i]);
      }
      return out + "}}";
    }
    case ExprKind::kIndex:
      return e.text + "[" + print_expr(e.args[0]) + "]";
    case ExprKind::kRangeSelect:
      return e.text + "[" + print_expr(e.args[0]) + ":" + print_expr(e.args[1]) + "]";
  }
  return "";
}

std::string print_stmt(const Stmt& s, int indent) {
  std::ostringstream os;
  const std::string p = pad(indent);
  switch (s.kind) {
    case StmtKind::kBlock:
      os << p << "begin";
      if (!s.keyword.empty()) os << " : " << s.keyword;
      os << '\n';
      for (const auto& b : s.body) os << print_stmt(b, indent + 1);
      os << p << "end\n";
      break;
    case StmtKind::kIf: {
      os << p << "if (" << print_expr(s.rhs) << ")\n";
      os << print_stmt(s.body[0], indent + 1);
      if (s.has_else()) {
        os << p << "else\n" << print_stmt(s.body[1], indent + 1);
      }
      break;
    }
    case StmtKind::kCase:
      os << p << s.keyword << " (" << print_expr(s.rhs) << ")\n";
      for (const auto& item : s.items) {
        os << pad(indent + 1);
        if (item.is_default) {
          os << "default:";
        } else {
          for (size_t i = 0; i < item.labels.size(); ++i) {
            if (i) os << ", ";
            os << print_expr(item.labels[i]);
          }
          os << ':';
        }
        os << '\n' << print_stmt(item.body, indent + 2);
      }
      os << p << "endcase\n";
      break;
    case StmtKind::kBlockingAssign:
      os << p << print_expr(s.lhs) << " = " << print_expr(s.rhs) << ";\n";
      break;
    case StmtKind::kNonblockingAssign:
      os << p << print_expr(s.lhs) << " <= " << print_expr(s.rhs) << ";\n";
      break;
    case StmtKind::kNull:
      os << p << ";\n";
      break;
  }
  return os.str();
}

std::string print_module(const Module& m) {
  std::ostringstream os;
  os << "module " << m.name;
  if (!m.header_params.empty()) {
    os << " #(";
    for (size_t i = 0; i < m.header_params.size(); ++i) {
      if (i) os << ", ";
      os << "parameter ";
      if (m.header_params[i].range) {
        os << print_range(*m.header_params[i].range) << ' ';
      }
      os << param_list(m.header_params[i]);
    }
    os << ")";
  }
  if (m.ansi && !m.ansi_ports.empty()) {
    os << " (\n";
    for (size_t i = 0; i < m.ansi_ports.size(); ++i) {
      const auto& d = m.ansi_ports[i];
      os << "  " << decl_head(d) << ' ';
      for (size_t j = 0; j < d.names.size(); ++j) {
        if (j) os << ", ";
        os << d.names[j].name;
      }
      os << (i + 1 < m.ansi_ports.size() ? ",\n" : "\n");
    }
    os << ");\n";
  } else if (!m.ansi && !m.port_list.empty()) {
    os << " (";
    for (size_t i = 0; i < m.port_list.size(); ++i) {
      if (i) os << ", ";
      os << m.port_list[i];
    }
    os << ");\n";
  } else {
    os << ";\n";
  }
  for (const auto& item : m.items) print_item(os, item);
  os << "endmodule\n";
  return os.str();
}

std::string print_modules(const std::vector<Module>& modules) {
  std::string out;
  for (size_t i = 0; i < modules.size(); ++i) {
    if (i) out += '\n';
    out += print_module(modules[i]);
  }
  return out;
}

}  // namespace forge::verilog
