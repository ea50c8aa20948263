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

#include "forge/verilog/semantic.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "forge/verilog/parser.h"

namespace forge::verilog {

std::optional<Literal> parse_literal(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != '_') s.push_back(c);
  }
  if (s.empty()) return std::nullopt;
  Literal lit;
  const size_t tick = s.find('\'');
  if (tick == std::string::npos) {
    uint64_t v = 0;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      v = v * 10 + static_cast<uint64_t>(c - '0');
    }
    lit.value = v;
    lit.width = 32;
    return lit;
  }
  if (tick > 0) {
    int w = 0;
    for (size_t i = 0; i < tick; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
      w = w * 10 + (s[i] - '0');
      if (w > 1 << 20) return std::nullopt;
    }
    if (w == 0) return std::nullopt;
    lit.width = w;
    lit.sized = true;
  }
  size_t i = tick + 1;
  if (i < s.size() && (s[i] == 's' || s[i] == 'S')) ++i;
  if (i >= s.size()) return std::nullopt;
  const char base = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i++])));
  int shift = 0;
  uint64_t radix = 0;
  switch (base) {
    case 'b': shift = 1; break;
    case 'o': shift = 3; break;
    case 'h': shift = 4; break;
    case 'd': radix = 10; break;
    default: return std::nullopt;
  }
  if (i >= s.size()) return std::nullopt;
  uint64_t v = 0;
  for (; i < s.size(); ++i) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
    uint64_t digit = 0;
    if (c == 'x' || c == 'z' || c == '?') {
      lit.has_unknown = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = static_cast<uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      digit = static_cast<uint64_t>(c - 'a' + 10);
    } else {
      return std::nullopt;
    }
    if (radix == 10) {
      if (digit > 9) return std::nullopt;
      v = v * 10 + digit;
    } else {
      if (digit >= (1ULL << shift)) return std::nullopt;
      v = (v << shift) | digit;
    }
  }
  if (lit.width < 64) v &= (1ULL << lit.width) - 1;
  lit.value = v;
  return lit;
}

std::optional<uint64_t> eval_const(const Expr& e, const ParamMap& params) {
  switch (e.kind) {
    case ExprKind::kNumber: {
      auto lit = parse_literal(e.text);
      if (!lit) return std::nullopt;
      return lit->value;
    }
    case ExprKind::kIdentifier: {
      auto it = params.find(e.text);
      if (it == params.end()) return std::nullopt;
      return it->second;
    }
    case ExprKind::kUnary: {
      auto v = eval_const(e.args[0], params);
      if (!v) return std::nullopt;
      if (e.text == "-") return ~*v + 1;
      if (e.text == "+") return *v;
      if (e.text == "~") return ~*v;
      if (e.text == "!") return static_cast<uint64_t>(*v == 0);
      return std::nullopt;
    }
    case ExprKind::kBinary: {
      auto a = eval_const(e.args[0], params);
      auto b = eval_const(e.args[1], params);
      if (!a || !b) return std::nullopt;
      const std::string& o = e.text;
      if (o == "+") return *a + *b;
      if (o == "-") return *a - *b;
      if (o == "*") return *a * *b;
      if (o == "/") return *b == 0 ? std::nullopt : std::optional<uint64_t>(*a / *b);
      if (o == "%") return *b == 0 ? std::nullopt : std::optional<uint64_t>(*a % *b);
      if (o == "**") {
        uint64_t r = 1;
        for (uint64_t i = 0; i < *b && i < 64; ++i) r *= *a;
        return r;
      }
      if (o == "<<") return *b >= 64 ? 0 : *a << *b;
      if (o == ">>") return *b >= 64 ? 0 : *a >> *b;
      if (o == "&") return *a & *b;
      if (o == "|") return *a | *b;
      if (o == "^") return *a ^ *b;
      if (o == "==") return static_cast<uint64_t>(*a == *b);
      if (o == "!=") return static_cast<uint64_t>(*a != *b);
      if (o == "<") return static_cast<uint64_t>(*a < *b);
      if (o == "<=") return static_cast<uint64_t>(*a <= *b);
      if (o == ">") return static_cast<uint64_t>(*a > *b);
      if (o == ">=") return static_cast<uint64_t>(*a >= *b);
      if (o == "&&") return static_cast<uint64_t>(*a && *b);
      if (o == "||") return static_cast<uint64_t>(*a || *b);
      return std::nullopt;
    }
    case ExprKind::kTernary: {
      auto c = eval_const(e.args[0], params);
      if (!c) return std::nullopt;
      return eval_const(e.args[*c ? 1 : 2], params);
    }
    default:
      return std::nullopt;
  }
}

std::vector<const Symbol*> SymbolTable::ordered() const {
  std::vector<const Symbol*> out;
  for (const auto& [_, s] : symbols) out.push_back(&s);
  std::sort(out.begin(), out.end(),
            [](const Symbol* a, const Symbol* b) { return a->order < b->order; });
  return out;
}

void for_each_identifier(
    const Expr& e, const std::function<void(const std::string&, const Expr&)>& fn) {
  if (e.kind == ExprKind::kIdentifier || e.kind == ExprKind::kIndex ||
      e.kind == ExprKind::kRangeSelect) {
    fn(e.text, e);
  }
  for (const auto& a : e.args) for_each_identifier(a, fn);
}

void for_each_stmt(const Stmt& s, const std::function<void(const Stmt&)>& fn) {
  fn(s);
  for (const auto& b : s.body) for_each_stmt(b, fn);
  for (const auto& item : s.items) for_each_stmt(item.body, fn);
}

std::vector<std::string> lvalue_names(const Expr& lhs) {
  std::vector<std::string> out;
  if (lhs.kind == ExprKind::kConcat) {
    for (const auto& a : lhs.args) {
      auto sub = lvalue_names(a);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  } else if (lhs.kind == ExprKind::kIdentifier || lhs.kind == ExprKind::kIndex ||
             lhs.kind == ExprKind::kRangeSelect) {
    out.push_back(lhs.text);
  }
  return out;
}

namespace {

void add_diag(std::vector<ParseDiagnostic>* diags, std::string msg, Span span) {
  if (diags) diags->push_back({std::move(msg), span, Severity::kError});
}

void add_params(const ParamDecl& p, SymbolTable& table, int& order,
                std::vector<ParseDiagnostic>* diags) {
  for (const auto& pa : p.params) {
    if (table.symbols.count(pa.name)) {
      add_diag(diags, "redeclaration of '" + pa.name + "'", pa.span);
      continue;
    }
    Symbol s;
    s.name = pa.name;
    s.kind = SymbolKind::kParam;
    s.range = p.range ? &*p.range : nullptr;
    s.decl_span = pa.span;
    s.order = order++;
    table.symbols[pa.name] = s;
    if (auto v = eval_const(pa.value, table.params)) table.params[pa.name] = *v;
  }
}

}  // namespace

SymbolTable build_symbols(const Module& m, std::vector<ParseDiagnostic>* diags) {
  SymbolTable table;
  int order = 0;
  for (const auto& p : m.header_params) add_params(p, table, order, diags);

  // Non-ANSI header names are provisional ports until a direction appears.
  std::set<std::string> pending;
  if (!m.ansi) {
    for (const auto& n : m.port_list) {
      if (!pending.insert(n).second) {
        add_diag(diags, "port '" + n + "' listed twice", m.port_list_span);
      }
    }
  }
  for (const auto& d : m.ansi_ports) {
    for (const auto& dn : d.names) {
      if (table.symbols.count(dn.name)) {
        add_diag(diags, "redeclaration of '" + dn.name + "'", dn.name_span);
        continue;
      }
      Symbol s;
      s.name = dn.name;
      s.kind = SymbolKind::kPort;
      s.direction = d.direction;
      s.type = d.type;
      s.range = d.range ? &*d.range : nullptr;
      s.decl_span = dn.name_span;
      s.order = order++;
      table.symbols[dn.name] = s;
    }
  }
  // Tracks names whose type came from an explicit port+net pair, to allow
  // exactly one such completion in non-ANSI modules.
  std::set<std::string> completed;
  for (const auto& item : m.items) {
    if (const auto* p = std::get_if<ParamDecl>(&item)) {
      add_params(*p, table, order, diags);
      continue;
    }
    const auto* d = std::get_if<Declaration>(&item);
    if (!d) continue;
    for (const auto& dn : d->names) {
      auto it = table.symbols.find(dn.name);
      if (it == table.symbols.end()) {
        Symbol s;
        s.name = dn.name;
        s.kind = d->is_port() || pending.count(dn.name) ? SymbolKind::kPort
                                                        : SymbolKind::kNet;
        s.direction = d->direction;
        s.type = d->type;
        s.range = d->range ? &*d->range : nullptr;
        s.array = dn.array ? &*dn.array : nullptr;
        s.decl_span = dn.name_span;
        s.order = order++;
        table.symbols[dn.name] = s;
        continue;
      }
      Symbol& s = it->second;
      const bool non_ansi_pair =
          !m.ansi && pending.count(dn.name) && !completed.count(dn.name) &&
          ((d->is_port() && s.direction == Direction::kNone &&
            d->type == NetType::kImplicit) ||
           (!d->is_port() && s.direction != Direction::kNone &&
            s.type == NetType::kImplicit));
      if (non_ansi_pair) {
        completed.insert(dn.name);
        if (d->is_port()) {
          s.direction = d->direction;
        } else {
          s.type = d->type;
        }
        if (d->range) s.range = &*d->range;
        continue;
      }
      add_diag(diags, "redeclaration of '" + dn.name + "'", dn.name_span);
    }
  }
  return table;
}

namespace {

struct BitRange {
  uint64_t lo = 0;
  uint64_t hi = 0;  // inclusive
};

std::optional<uint64_t> range_width(const Range* r, const ParamMap& params) {
  if (!r) return 1;
  auto a = eval_const(r->msb, params);
  auto b = eval_const(r->lsb, params);
  if (!a || !b) return std::nullopt;
  return (*a > *b ? *a - *b : *b - *a) + 1;
}

// Bits of `sym` driven by target `e`; full width when unknown.
BitRange driven_bits(const Expr& e, const Symbol& sym, const ParamMap& params) {
  const uint64_t w = range_width(sym.range, params).value_or(64);
  BitRange full{0, w - 1};
  uint64_t base = 0;
  if (sym.range) {
    auto a = eval_const(sym.range->msb, params);
    auto b = eval_const(sym.range->lsb, params);
    if (a && b) base = std::min(*a, *b);
  }
  if (sym.array) return full;
  if (e.kind == ExprKind::kIndex) {
    if (auto i = eval_const(e.args[0], params); i && *i >= base) {
      return {*i - base, *i - base};
    }
  } else if (e.kind == ExprKind::kRangeSelect) {
    auto a = eval_const(e.args[0], params);
    auto b = eval_const(e.args[1], params);
    if (a && b && std::min(*a, *b) >= base) {
      return {std::min(*a, *b) - base, std::max(*a, *b) - base};
    }
  }
  return full;
}

void flatten_targets(const Expr& lhs, std::vector<const Expr*>& out) {
  if (lhs.kind == ExprKind::kConcat) {
    for (const auto& a : lhs.args) flatten_targets(a, out);
  } else {
    out.push_back(&lhs);
  }
}

void check_module(const Module& m, std::vector<ParseDiagnostic>& diags) {
  SymbolTable table = build_symbols(m, &diags);

  if (!m.ansi) {
    std::set<std::string> header(m.port_list.begin(), m.port_list.end());
    for (const auto& item : m.items) {
      const auto* d = std::get_if<Declaration>(&item);
      if (!d || !d->is_port()) continue;
      for (const auto& dn : d->names) {
        if (!header.count(dn.name)) {
          add_diag(&diags, "'" + dn.name + "' is not in the port list", dn.name_span);
        }
      }
    }
    for (const auto& n : m.port_list) {
      const Symbol* s = table.find(n);
      if (!s || s->direction == Direction::kNone) {
        add_diag(&diags, "port '" + n + "' has no direction declaration",
                 m.port_list_span);
      }
    }
  }
  for (const auto& [name, s] : table.symbols) {
    if (s.direction == Direction::kInput && s.is_variable()) {
      add_diag(&diags, "input port '" + name + "' declared as a variable",
               s.decl_span);
    }
  }

  auto check_refs = [&](const Expr& e) {
    for_each_identifier(e, [&](const std::string& name, const Expr& at) {
      if (!table.find(name)) {
        add_diag(&diags, "undeclared identifier '" + name + "'", at.span);
      }
    });
  };

  std::map<std::string, std::vector<BitRange>> continuous;
  std::map<std::string, std::set<size_t>> procedural;

  auto continuous_target = [&](const Expr& lhs) {
    std::vector<const Expr*> targets;
    flatten_targets(lhs, targets);
    for (const Expr* t : targets) {
      const Symbol* s = table.find(t->text);
      if (!s) continue;
      if (s->kind == SymbolKind::kParam) {
        add_diag(&diags, "cannot assign to parameter '" + s->name + "'", t->span);
      } else if (s->direction == Direction::kInput) {
        add_diag(&diags, "continuous assignment drives input '" + s->name + "'", t->span);
      } else if (s->is_variable()) {
        add_diag(&diags, "continuous assignment to variable '" + s->name + "'", t->span);
      } else {
        BitRange r = driven_bits(*t, *s, table.params);
        auto& prior = continuous[s->name];
        for (const auto& p : prior) {
          if (r.lo <= p.hi && p.lo <= r.hi) {
            add_diag(&diags, "multiple drivers for '" + s->name + "'", t->span);
            break;
          }
        }
        prior.push_back(r);
      }
    }
  };

  for (const auto& d : m.ansi_ports) {
    if (d.range) {
      check_refs(d.range->msb);
      check_refs(d.range->lsb);
    }
  }
  for (size_t idx = 0; idx < m.items.size(); ++idx) {
    const ModuleItem& item = m.items[idx];
    if (const auto* d = std::get_if<Declaration>(&item)) {
      if (d->range) {
        check_refs(d->range->msb);
        check_refs(d->range->lsb);
      }
      for (const auto& dn : d->names) {
        if (dn.init) {
          check_refs(*dn.init);
          continuous_target(Expr::identifier(dn.name));
        }
      }
    } else if (const auto* p = std::get_if<ParamDecl>(&item)) {
      for (const auto& pa : p->params) check_refs(pa.value);
    } else if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
      for (const auto& as : a->assigns) {
        check_refs(as.lhs);
        check_refs(as.rhs);
        continuous_target(as.lhs);
      }
    } else if (const auto* al = std::get_if<Always>(&item)) {
      for (const auto& s : al->sensitivity) check_refs(s.signal);
      for_each_stmt(al->body, [&](const Stmt& s) {
        switch (s.kind) {
          case StmtKind::kBlockingAssign:
          case StmtKind::kNonblockingAssign: {
            check_refs(s.lhs);
            check_refs(s.rhs);
            std::vector<const Expr*> targets;
            flatten_targets(s.lhs, targets);
            for (const Expr* t : targets) {
              const Symbol* sym = table.find(t->text);
              if (!sym) continue;
              if (sym->kind == SymbolKind::kParam) {
                add_diag(&diags, "cannot assign to parameter '" + sym->name + "'", t->span);
              } else if (sym->direction == Direction::kInput) {
                add_diag(&diags, "procedural assignment drives input '" + sym->name + "'", t->span);
              } else if (!sym->is_variable()) {
                add_diag(&diags, "procedural assignment to net '" + sym->name + "'", t->span);
              } else {
                procedural[sym->name].insert(idx);
              }
            }
            break;
          }
          case StmtKind::kIf:
            check_refs(s.rhs);
            break;
          case StmtKind::kCase:
            check_refs(s.rhs);
            for (const auto& item : s.items) {
              for (const auto& l : item.labels) check_refs(l);
            }
            break;
          default:
            break;
        }
      });
    }
  }
  for (const auto& [name, blocks] : procedural) {
    if (blocks.size() > 1) {
      add_diag(&diags, "multiple drivers for '" + name + "' from separate always blocks",
               table.find(name)->decl_span);
    }
  }
}

std::pair<size_t, size_t> line_col(const std::string& src, size_t offset) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < offset && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::vector<ParseDiagnostic> check_declarations(const SourceUnit& unit) {
  std::vector<ParseDiagnostic> diags;
  std::set<std::string> names;
  for (const auto& m : unit.modules) {
    if (!names.insert(m.name).second) {
      add_diag(&diags, "duplicate module '" + m.name + "'", m.header_span);
    }
    check_module(m, diags);
  }
  return diags;
}

FrontendCheck check_source(std::string_view source) {
  FrontendCheck out;
  out.unit = parse(source);
  out.declaration_diagnostics = check_declarations(out.unit);
  return out;
}

std::string FrontendCheck::summary() const {
  std::ostringstream os;
  auto emit = [&](const ParseDiagnostic& d) {
    auto [line, col] = line_col(unit.source, d.span.begin);
    os << line << ':' << col << ": "
       << (d.severity == Severity::kError ? "error: " : "warning: ") << d.message
       << '\n';
  };
  for (const auto& d : unit.diagnostics) emit(d);
  for (const auto& d : declaration_diagnostics) emit(d);
  return os.str();
}

}  // namespace forge::verilog
