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


#include "forge/positive/transforms.h"

#include <algorithm>
#include <functional>
#include <set>

#include "forge/util/error.h"
#include "forge/util/rng.h"
#include "forge/verilog/parser.h"
#include "forge/verilog/printer.h"
#include "forge/verilog/semantic.h"

namespace forge::positive {

using verilog::Always;
using verilog::ContinuousAssign;
using verilog::Declaration;
using verilog::Expr;
using verilog::ExprKind;
using verilog::Module;
using verilog::SourceUnit;
using verilog::Span;
using verilog::Stmt;
using verilog::StmtKind;
using verilog::TokenKind;

namespace {

struct Edit {
  Span span;
  std::string replacement;
  std::string details;
};

std::string apply(const std::string& src, const Edit& e) {
  return src.substr(0, e.span.begin) + e.replacement + src.substr(e.span.end);
}

std::string text_of(const SourceUnit& u, Span s) { return u.source.substr(s.begin, s.size()); }

// Visits value expressions with a flag telling whether the expression is
// the root of its statement (so a rewrite needs no extra parentheses).
void walk(const Expr& e, bool root, const std::function<void(const Expr&, bool)>& fn) {
  fn(e, root);
  for (const auto& a : e.args) walk(a, false, fn);
}

void for_each_value_expr(const Module& m, const std::function<void(const Expr&, bool)>& fn) {
  for (const auto& item : m.items) {
    if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
      for (const auto& a : ca->assigns) walk(a.rhs, true, fn);
    } else if (const auto* al = std::get_if<Always>(&item)) {
      verilog::for_each_stmt(al->body, [&](const Stmt& s) {
        if (s.kind == StmtKind::kBlockingAssign || s.kind == StmtKind::kNonblockingAssign) {
          walk(s.rhs, true, fn);
        } else if (s.kind == StmtKind::kIf || s.kind == StmtKind::kCase) {
          walk(s.rhs, true, fn);
        }
      });
    }
  }
}

bool is_negation(const Expr& e, const std::string& op) {
  return e.kind == ExprKind::kUnary && e.text == op;
}

std::string operand_text(const Expr& e) {
  const std::string text = verilog::print_expr(e);
  const bool compound = e.kind == ExprKind::kBinary || e.kind == ExprKind::kTernary;
  return compound ? "(" + text + ")" : text;
}

std::string negated(const std::string& neg, const Expr& e) {
  return "(" + neg + operand_text(e) + ")";
}

std::vector<Edit> demorgan_sites(const SourceUnit& u, const Module& m) {
  std::vector<Edit> out;
  for_each_value_expr(m, [&](const Expr& e, bool root) {
    auto add = [&](const std::string& text) {
      out.push_back({e.span, root ? text : "(" + text + ")", text_of(u, e.span) + " => " + text});
    };
    for (const auto& [neg, conj, disj] :
         {std::tuple<std::string, std::string, std::string>{"~", "&", "|"}, {"!", "&&", "||"}}) {
      auto dual = [&, conj = conj, disj = disj](const std::string& op) {
        return op == conj ? disj : conj;
      };
      // ~(x & y) -> (~x) | (~y)
      if (is_negation(e, neg) && e.args[0].kind == ExprKind::kBinary &&
          (e.args[0].text == conj || e.args[0].text == disj)) {
        const Expr& inner = e.args[0];
        add(negated(neg, inner.args[0]) + " " + dual(inner.text) + " " +
            negated(neg, inner.args[1]));
        return;
      }
      if (e.kind != ExprKind::kBinary || (e.text != conj && e.text != disj)) continue;
      if (is_negation(e.args[0], neg) && is_negation(e.args[1], neg)) {
        // (~x) | (~y) -> ~(x & y)
        add(neg + "(" + operand_text(e.args[0].args[0]) + " " + dual(e.text) + " " +
            operand_text(e.args[1].args[0]) + ")");
      } else {
        // x & y -> ~((~x) | (~y))
        add(neg + "(" + negated(neg, e.args[0]) + " " + dual(e.text) + " " +
            negated(neg, e.args[1]) + ")");
      }
      return;
    }
  });
  return out;
}

std::vector<Edit> commutative_sites(const SourceUnit& u, const Module& m) {
  static const std::set<std::string> kCommutative = {"+", "*", "&", "|", "^", "=="};
  std::vector<Edit> out;
  for_each_value_expr(m, [&](const Expr& e, bool) {
    if (e.kind != ExprKind::kBinary || !kCommutative.count(e.text)) return;
    if (e.args[0] == e.args[1]) return;
    const Expr swapped = Expr::binary(e.text, e.args[1], e.args[0]);
    // Same operator, so the surrounding precedence context is unchanged.
    out.push_back({e.span, verilog::print_expr(swapped),
                   text_of(u, e.span) + " => " + verilog::print_expr(swapped)});
  });
  return out;
}

std::string indentation(const std::string& src, size_t pos) {
  size_t p = pos;
  while (p > 0 && src[p - 1] != '\n') --p;
  size_t q = p;
  while (q < src.size() && (src[q] == ' ' || src[q] == '\t')) ++q;
  return src.substr(p, q - p);
}

bool single_assign(const Stmt& s) {
  return s.kind == StmtKind::kBlockingAssign || s.kind == StmtKind::kNonblockingAssign;
}

// A statement or a begin/end block holding exactly one assignment.
const Stmt* unwrap_single(const Stmt& s) {
  if (single_assign(s)) return &s;
  if (s.kind == StmtKind::kBlock && s.body.size() == 1 && single_assign(s.body[0])) {
    return &s.body[0];
  }
  return nullptr;
}

std::vector<Edit> ternary_sites(const SourceUnit& u, const Module& m) {
  std::vector<Edit> out;
  for (const auto& item : m.items) {
    const auto* al = std::get_if<Always>(&item);
    if (!al) continue;
    // Synthesis reads an if on an edge signal as an asynchronous set or
    // reset; a ternary there is not synthesizable.
    const auto edges = std::count_if(al->sensitivity.begin(), al->sensitivity.end(),
                                     [](const auto& e) { return e.edge != verilog::Edge::kNone; });
    if (edges > 1) continue;
    verilog::for_each_stmt(al->body, [&](const Stmt& s) {
      const std::string op = s.kind == StmtKind::kNonblockingAssign ? "<=" : "=";
      if (s.kind == StmtKind::kIf && s.has_else()) {
        const Stmt* a = unwrap_single(s.body[0]);
        const Stmt* b = unwrap_single(s.body[1]);
        if (!a || !b || a->kind != b->kind || !(a->lhs == b->lhs)) return;
        const std::string aop = a->kind == StmtKind::kNonblockingAssign ? "<=" : "=";
        const Expr rhs = Expr::ternary(s.rhs, a->rhs, b->rhs);
        const std::string text =
            verilog::print_expr(a->lhs) + " " + aop + " " + verilog::print_expr(rhs) + ";";
        out.push_back({s.span, text, "if/else => ternary"});
      } else if (single_assign(s) && s.rhs.kind == ExprKind::kTernary) {
        const std::string lhs = verilog::print_expr(s.lhs);
        const std::string pad = indentation(u.source, s.span.begin);
        const std::string text = "if (" + verilog::print_expr(s.rhs.args[0]) + ") " + lhs +
                                 " " + op + " " + verilog::print_expr(s.rhs.args[1]) + ";\n" +
                                 pad + "else " + lhs + " " + op + " " +
                                 verilog::print_expr(s.rhs.args[2]) + ";";
        out.push_back({s.span, text, "ternary => if/else"});
      }
    });
  }
  return out;
}

bool references(const Declaration& d, const std::set<std::string>& names) {
  bool hit = false;
  auto check = [&](const Expr& e) {
    verilog::for_each_identifier(e, [&](const std::string& n, const Expr&) {
      if (names.count(n)) hit = true;
    });
  };
  for (const auto& dn : d.names) {
    if (dn.init) check(*dn.init);
    if (dn.array) {
      check(dn.array->msb);
      check(dn.array->lsb);
    }
  }
  if (d.range) {
    check(d.range->msb);
    check(d.range->lsb);
  }
  return hit;
}

std::set<std::string> declared(const Declaration& d) {
  std::set<std::string> out;
  for (const auto& dn : d.names) out.insert(dn.name);
  return out;
}

std::vector<Edit> reorder_sites(const SourceUnit& u, const Module& m) {
  std::vector<Edit> out;
  for (size_t i = 0; i + 1 < m.items.size(); ++i) {
    const auto* a = std::get_if<Declaration>(&m.items[i]);
    const auto* b = std::get_if<Declaration>(&m.items[i + 1]);
    if (!a || !b || a->is_port() || b->is_port()) continue;
    if (references(*a, declared(*b)) || references(*b, declared(*a))) continue;
    const std::string ta = text_of(u, a->span);
    const std::string tb = text_of(u, b->span);
    const std::string between = u.source.substr(a->span.end, b->span.begin - a->span.end);
    out.push_back({Span{a->span.begin, b->span.end}, tb + between + ta,
                   "swap '" + ta + "' and '" + tb + "'"});
  }
  return out;
}

std::set<std::string> all_identifiers(const SourceUnit& u) {
  std::set<std::string> out;
  for (const auto& t : u.tokens) {
    if (t.kind == TokenKind::kIdentifier) out.insert(t.text);
  }
  return out;
}

// Internal (non-port, non-parameter) names in declaration order.
std::vector<std::string> internal_names(const Module& m) {
  std::vector<verilog::ParseDiagnostic> diags;
  const verilog::SymbolTable table = verilog::build_symbols(m, &diags);
  std::vector<std::string> out;
  for (const verilog::Symbol* s : table.ordered()) {
    if (s->kind == verilog::SymbolKind::kNet) out.push_back(s->name);
  }
  return out;
}

Positive rename(const SourceUnit& u, uint64_t seed) {
  std::vector<std::string> names;
  for (const auto& m : u.modules) {
    for (auto& n : internal_names(m)) names.push_back(std::move(n));
  }
  if (names.empty()) {
    throw Error(ErrorCode::kTransformInapplicable, "Rename: no internal identifiers");
  }
  const std::set<std::string> taken = all_identifiers(u);
  std::vector<std::string> fresh;
  for (size_t k = 0; fresh.size() < names.size(); ++k) {
    std::string candidate = "n" + std::to_string(k);
    if (!taken.count(candidate) && !verilog::is_keyword(candidate)) fresh.push_back(candidate);
  }
  Rng rng(seed);
  rng.shuffle(fresh);
  Positive p;
  p.record.transform_id = TransformId::kRename;
  p.record.seed = seed;
  for (size_t i = 0; i < names.size(); ++i) p.record.renaming[names[i]] = fresh[i];
  std::string out;
  for (const auto& t : u.tokens) {
    auto it = t.kind == TokenKind::kIdentifier ? p.record.renaming.find(t.text)
                                               : p.record.renaming.end();
    out += it == p.record.renaming.end() ? t.text : it->second;
  }
  for (const auto& [from, to] : p.record.renaming) {
    if (!p.record.details.empty()) p.record.details += ",";
    p.record.details += from + "->" + to;
  }
  p.source = std::move(out);
  return p;
}

void rename_expr(Expr& e, const std::map<std::string, std::string>& r) {
  if (e.kind == ExprKind::kIdentifier || e.kind == ExprKind::kIndex ||
      e.kind == ExprKind::kRangeSelect) {
    if (auto it = r.find(e.text); it != r.end()) e.text = it->second;
  }
  for (auto& a : e.args) rename_expr(a, r);
}

void rename_range(std::optional<verilog::Range>& range, const std::map<std::string, std::string>& r) {
  if (!range) return;
  rename_expr(range->msb, r);
  rename_expr(range->lsb, r);
}

void rename_stmt(Stmt& s, const std::map<std::string, std::string>& r) {
  rename_expr(s.lhs, r);
  rename_expr(s.rhs, r);
  for (auto& b : s.body) rename_stmt(b, r);
  for (auto& ci : s.items) {
    for (auto& l : ci.labels) rename_expr(l, r);
    rename_stmt(ci.body, r);
  }
}

void rename_decl(Declaration& d, const std::map<std::string, std::string>& r) {
  rename_range(d.range, r);
  for (auto& dn : d.names) {
    if (auto it = r.find(dn.name); it != r.end()) dn.name = it->second;
    rename_range(dn.array, r);
    if (dn.init) rename_expr(*dn.init, r);
  }
}

void rename_params(verilog::ParamDecl& p, const std::map<std::string, std::string>& r) {
  rename_range(p.range, r);
  for (auto& pa : p.params) {
    if (auto it = r.find(pa.name); it != r.end()) pa.name = it->second;
    rename_expr(pa.value, r);
  }
}

}  // namespace

std::string_view transform_name(TransformId id) {
  switch (id) {
    case TransformId::kRename: return "Rename";
    case TransformId::kDeMorgan: return "DeMorgan";
    case TransformId::kCommutativeSwap: return "CommutativeSwap";
    case TransformId::kTernaryRewrite: return "TernaryRewrite";
    case TransformId::kDeclReorder: return "DeclReorder";
  }
  return "?";
}

std::optional<TransformId> parse_transform(std::string_view name) {
  for (TransformId id : all_transforms()) {
    if (transform_name(id) == name) return id;
  }
  return std::nullopt;
}

const std::vector<TransformId>& all_transforms() {
  static const std::vector<TransformId> kAll = {
      TransformId::kRename, TransformId::kDeMorgan, TransformId::kCommutativeSwap,
      TransformId::kTernaryRewrite, TransformId::kDeclReorder};
  return kAll;
}

Positive transform(const SourceUnit& anchor, TransformId id, uint64_t seed) {
  if (anchor.has_errors() || anchor.modules.empty()) {
    throw Error(ErrorCode::kAnchorInvalid, "anchor has parse errors");
  }
  if (id == TransformId::kRename) return rename(anchor, seed);
  std::vector<Edit> sites;
  for (const auto& m : anchor.modules) {
    std::vector<Edit> more;
    switch (id) {
      case TransformId::kDeMorgan: more = demorgan_sites(anchor, m); break;
      case TransformId::kCommutativeSwap: more = commutative_sites(anchor, m); break;
      case TransformId::kTernaryRewrite: more = ternary_sites(anchor, m); break;
      case TransformId::kDeclReorder: more = reorder_sites(anchor, m); break;
      case TransformId::kRename: break;
    }
    sites.insert(sites.end(), more.begin(), more.end());
  }
  if (sites.empty()) {
    throw Error(ErrorCode::kTransformInapplicable,
                std::string(transform_name(id)) + ": no applicable site");
  }
  Rng rng(seed);
  const Edit& e = sites[rng.below(sites.size())];
  Positive p;
  p.record.transform_id = id;
  p.record.seed = seed;
  p.record.details = e.details;
  p.source = apply(anchor.source, e);
  return p;
}

std::vector<Positive> generate_positives(const SourceUnit& anchor, size_t count, uint64_t seed,
                                         const std::vector<TransformId>& allowed) {
  std::vector<TransformId> order = allowed;
  Rng rng(derive_seed(seed, 0x706f73));
  rng.shuffle(order);
  std::vector<Positive> out;
  std::set<std::string> seen = {anchor.source};
  std::set<TransformId> exhausted;
  const size_t max_attempts = std::max<size_t>(count, 1) * order.size() * 4;
  for (size_t k = 0; k < max_attempts && out.size() < count; ++k) {
    const TransformId id = order[k % order.size()];
    if (exhausted.count(id)) continue;
    try {
      Positive p = transform(anchor, id, derive_seed(seed, k));
      if (seen.insert(p.source).second) out.push_back(std::move(p));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTransformInapplicable) throw;
      exhausted.insert(id);
    }
  }
  return out;
}

void rename_module(Module& m, const std::map<std::string, std::string>& r) {
  for (auto& p : m.header_params) rename_params(p, r);
  for (auto& d : m.ansi_ports) rename_decl(d, r);
  for (auto& name : m.port_list) {
    if (auto it = r.find(name); it != r.end()) name = it->second;
  }
  for (auto& item : m.items) {
    std::visit(
        [&](auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Declaration>) {
            rename_decl(x, r);
          } else if constexpr (std::is_same_v<T, verilog::ParamDecl>) {
            rename_params(x, r);
          } else if constexpr (std::is_same_v<T, ContinuousAssign>) {
            for (auto& a : x.assigns) {
              rename_expr(a.lhs, r);
              rename_expr(a.rhs, r);
            }
          } else {
            for (auto& s : x.sensitivity) rename_expr(s.signal, r);
            rename_stmt(x.body, r);
          }
        },
        item);
  }
}

namespace {

// Renames every non-port symbol to prefix + declaration index.
Module canonical_module(Module m, const std::string& prefix) {
  std::vector<verilog::ParseDiagnostic> diags;
  const verilog::SymbolTable table = verilog::build_symbols(m, &diags);
  std::map<std::string, std::string> r;
  int k = 0;
  for (const verilog::Symbol* s : table.ordered()) {
    if (s->kind == verilog::SymbolKind::kPort) continue;
    r[s->name] = prefix + std::to_string(k++);
  }
  rename_module(m, r);
  return m;
}

}  // namespace

bool alpha_equivalent(const SourceUnit& a, const SourceUnit& b) {
  if (a.has_errors() || b.has_errors() || a.modules.size() != b.modules.size()) return false;
  for (size_t i = 0; i < a.modules.size(); ++i) {
    // A leading space cannot collide with an identifier.
    if (!(canonical_module(a.modules[i], " i") == canonical_module(b.modules[i], " i"))) {
      return false;
    }
  }
  return true;
}

std::string canonical_names_source(const SourceUnit& u) {
  if (u.has_errors()) throw Error(ErrorCode::kAnchorInvalid, "source has parse errors");
  std::string prefix = "forge_c";
  for (bool clash = true; clash;) {
    clash = false;
    for (const auto& t : u.tokens) {
      if (t.kind == TokenKind::kIdentifier && t.text.rfind(prefix, 0) == 0) clash = true;
    }
    if (clash) prefix += "_";
  }
  std::vector<Module> modules;
  for (const auto& m : u.modules) modules.push_back(canonical_module(m, prefix));
  return verilog::print_modules(modules);
}

}  // namespace forge::positive
