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


#include "forge/mutation/mutation.h"

#include <algorithm>
#include <functional>
#include <set>

#include "forge/util/error.h"
#include "forge/util/rng.h"
#include "forge/verilog/printer.h"
#include "forge/verilog/semantic.h"

namespace forge::mutation {

using verilog::Always;
using verilog::ContinuousAssign;
using verilog::Declaration;
using verilog::Direction;
using verilog::Expr;
using verilog::ExprKind;
using verilog::Module;
using verilog::NetType;
using verilog::SourceUnit;
using verilog::Span;
using verilog::Stmt;
using verilog::StmtKind;
using verilog::Token;
using verilog::TokenKind;

namespace {

// Significant token matching `text` whose span lies within [begin, end).
const Token* find_token(const SourceUnit& u, size_t begin, size_t end, std::string_view text) {
  auto it = std::lower_bound(u.tokens.begin(), u.tokens.end(), begin,
                             [](const Token& t, size_t pos) { return t.span.begin < pos; });
  for (; it != u.tokens.end() && it->span.end <= end; ++it) {
    if (!it->is_trivia() && it->text == text) return &*it;
  }
  return nullptr;
}

// End of the last significant token ending at or before `pos`.
size_t last_significant_end(const SourceUnit& u, size_t pos) {
  size_t best = 0;
  for (const Token& t : u.tokens) {
    if (t.span.end > pos) break;
    if (!t.is_trivia()) best = t.span.end;
  }
  return best;
}

size_t line_start(std::string_view src, size_t pos) {
  size_t p = pos;
  while (p > 0 && (src[p - 1] == ' ' || src[p - 1] == '\t')) --p;
  return (p == 0 || src[p - 1] == '\n') ? p : pos;
}

// Extends a statement span through trailing blanks and one newline.
size_t through_line_end(std::string_view src, size_t pos) {
  size_t p = pos;
  while (p < src.size() && (src[p] == ' ' || src[p] == '\t')) ++p;
  if (p < src.size() && src[p] == '\n') return p + 1;
  return pos;
}

std::string indentation_at(std::string_view src, size_t pos) {
  const size_t start = line_start(src, pos);
  return std::string(src.substr(start, pos - start));
}

void walk_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  for (const auto& a : e.args) walk_expr(a, fn);
}

// Every expression evaluated by the module: assignment values, conditions,
// selectors and case labels. Targets are excluded.
void for_each_value_expr(const Module& m, const std::function<void(const Expr&)>& fn) {
  for (const auto& item : m.items) {
    if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
      for (const auto& a : ca->assigns) walk_expr(a.rhs, fn);
    } else if (const auto* al = std::get_if<Always>(&item)) {
      verilog::for_each_stmt(al->body, [&](const Stmt& s) {
        if (s.kind != StmtKind::kBlock && s.kind != StmtKind::kNull) walk_expr(s.rhs, fn);
        for (const auto& ci : s.items) {
          for (const auto& l : ci.labels) walk_expr(l, fn);
        }
      });
    }
  }
}

struct Edit {
  Span span;
  std::string replacement;
};

using SiteFn = std::function<void(const SourceUnit&, const Module&, std::vector<Site>&)>;

void add(std::vector<Site>& out, size_t begin, size_t end, std::string replacement) {
  out.push_back({Span{begin, end}, std::move(replacement)});
}

// Binary operator token of `e`.
const Token* operator_token(const SourceUnit& u, const Expr& e) {
  return find_token(u, e.args[0].span.end, e.args[1].span.begin, e.text);
}

void binary_swaps(const SourceUnit& u, const Module& m,
                  const std::vector<std::pair<std::string, std::string>>& table,
                  std::vector<Site>& out) {
  for_each_value_expr(m, [&](const Expr& e) {
    if (e.kind != ExprKind::kBinary) return;
    for (const auto& [from, to] : table) {
      if (e.text != from) continue;
      if (const Token* t = operator_token(u, e)) add(out, t->span.begin, t->span.end, to);
    }
  });
}

std::set<std::string> used_names(const Module& m) {
  std::set<std::string> used;
  auto note = [&](const Expr& e) {
    verilog::for_each_identifier(e, [&](const std::string& n, const Expr&) { used.insert(n); });
  };
  for (const auto& item : m.items) {
    if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
      for (const auto& a : ca->assigns) {
        note(a.lhs);
        note(a.rhs);
      }
    } else if (const auto* al = std::get_if<Always>(&item)) {
      for (const auto& s : al->sensitivity) note(s.signal);
      verilog::for_each_stmt(al->body, [&](const Stmt& s) {
        note(s.lhs);
        note(s.rhs);
        for (const auto& ci : s.items) {
          for (const auto& l : ci.labels) note(l);
        }
      });
    } else if (const auto* d = std::get_if<Declaration>(&item)) {
      for (const auto& dn : d->names) {
        if (dn.init) note(*dn.init);
      }
    }
  }
  return used;
}

std::set<std::string> port_set(const Module& m) {
  auto names = m.port_names();
  return {names.begin(), names.end()};
}

// Names driven by a continuous assignment.
std::set<std::string> continuously_driven(const Module& m) {
  std::set<std::string> out;
  for (const auto& item : m.items) {
    if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
      for (const auto& a : ca->assigns) {
        for (auto& n : verilog::lvalue_names(a.lhs)) out.insert(n);
      }
    }
  }
  return out;
}

const std::map<std::string, std::string>& operator_flips() {
  static const std::map<std::string, std::string> kFlips = {
      {"&", "|"},  {"|", "&"},   {"^", "&"},   {"+", "-"},  {"-", "+"},   {"*", "+"},
      {"&&", "||"}, {"||", "&&"}, {"==", "!="}, {"!=", "=="}, {"<", ">="}, {">", "<="},
      {"<=", ">"}, {">=", "<"}};
  return kFlips;
}

// A right-hand side that differs from `rhs` as a driver: operands swapped
// and operator flipped, or a complement.
Expr conflicting_rhs(const Expr& rhs) {
  if (rhs.kind == ExprKind::kBinary) {
    auto it = operator_flips().find(rhs.text);
    if (it != operator_flips().end()) return Expr::binary(it->second, rhs.args[1], rhs.args[0]);
  }
  return Expr::unary("~", rhs);
}

// ---- Punctuation ----

void sites_p1(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  for (const Token& t : u.tokens) {
    if (t.span.begin < m.span.begin || t.span.end > m.span.end) continue;
    if (t.is(TokenKind::kPunctuation, ";")) add(out, t.span.begin, t.span.end, "");
  }
}

void sites_p2(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  for (const Token& t : u.tokens) {
    if (t.span.begin < m.span.begin || t.span.end > m.span.end) continue;
    if (t.is(TokenKind::kPunctuation, ",")) add(out, t.span.begin, t.span.end, "");
  }
}

void sites_p3(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  if (m.port_list_span.end > m.port_list_span.begin) {
    const size_t at = last_significant_end(u, m.port_list_span.end);
    if (at > m.port_list_span.begin) add(out, at, at, ",");
  }
  for (const auto& item : m.items) {
    if (const auto* d = std::get_if<Declaration>(&item)) {
      if (!d->names.empty()) {
        const size_t at = d->names.back().span.end;
        add(out, at, at, ",");
      }
    } else if (const auto* al = std::get_if<Always>(&item)) {
      if (!al->star && !al->sensitivity.empty()) {
        const size_t at = al->sensitivity.back().signal.span.end;
        add(out, at, at, ",");
      }
    }
  }
  for_each_value_expr(m, [&](const Expr& e) {
    if (e.kind == ExprKind::kConcat && !e.args.empty()) {
      const size_t at = e.args.back().span.end;
      add(out, at, at, ",");
    }
  });
}

void sites_p4(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  auto range_colon = [&](const verilog::Range& r) {
    if (const Token* t = find_token(u, r.msb.span.end, r.lsb.span.begin, ":")) {
      add(out, t->span.begin, t->span.end, "");
    }
  };
  auto decl = [&](const Declaration& d) {
    if (d.range) range_colon(*d.range);
    for (const auto& dn : d.names) {
      if (dn.array) range_colon(*dn.array);
    }
  };
  for (const auto& d : m.ansi_ports) decl(d);
  for (const auto& p : m.header_params) {
    if (p.range) range_colon(*p.range);
  }
  for (const auto& item : m.items) {
    if (const auto* d = std::get_if<Declaration>(&item)) decl(*d);
    if (const auto* p = std::get_if<verilog::ParamDecl>(&item)) {
      if (p->range) range_colon(*p->range);
    }
  }
}

// ---- Keyword ----

void sites_k1(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  for (const Token& t : u.tokens) {
    if (t.span.begin < m.span.begin || t.span.end > m.span.end) continue;
    if (t.kind != TokenKind::kKeyword) continue;
    std::string typo = t.text;
    if (typo.size() >= 4) {
      typo.pop_back();
    } else if (typo.size() >= 2) {
      std::swap(typo[typo.size() - 2], typo[typo.size() - 1]);
    } else {
      continue;
    }
    if (verilog::is_keyword(typo)) continue;
    add(out, t.span.begin, t.span.end, typo);
  }
}

void sites_k2(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  for (const Token& t : u.tokens) {
    if (t.span.begin < m.span.begin || t.span.end > m.span.end) continue;
    if (t.kind != TokenKind::kKeyword) continue;
    if (t.text == "end") add(out, t.span.begin, t.span.end, "endcase");
    if (t.text == "endcase") add(out, t.span.begin, t.span.end, "end");
    if (t.text == "endmodule") add(out, t.span.begin, t.span.end, "end");
  }
}

void sites_k3(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  for (const Token& t : u.tokens) {
    if (t.span.begin < m.span.begin || t.span.end > m.span.end) continue;
    if (t.kind != TokenKind::kPunctuation) continue;
    if (t.text == ")" || t.text == "]" || t.text == "}") add(out, t.span.begin, t.span.end, "");
  }
}

// ---- Operator ----

void sites_o1(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  for (const auto& item : m.items) {
    if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
      for (const auto& a : ca->assigns) {
        if (const Token* t = find_token(u, a.lhs.span.end, a.rhs.span.begin, "=")) {
          add(out, t->span.begin, t->span.end, "<=");
        }
      }
    } else if (const auto* al = std::get_if<Always>(&item)) {
      verilog::for_each_stmt(al->body, [&](const Stmt& s) {
        if (s.kind == StmtKind::kBlockingAssign) {
          if (const Token* t = find_token(u, s.lhs.span.end, s.rhs.span.begin, "=")) {
            add(out, t->span.begin, t->span.end, "<=");
          }
        } else if (s.kind == StmtKind::kNonblockingAssign) {
          if (const Token* t = find_token(u, s.lhs.span.end, s.rhs.span.begin, "<=")) {
            add(out, t->span.begin, t->span.end, "=");
          }
        }
      });
    }
  }
}

void sites_o2(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  binary_swaps(u, m, {{"&&", "||"}, {"||", "&&"}}, out);
}

void sites_o3(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  binary_swaps(u, m, {{"&", "|"}, {"|", "&"}, {"^", "&"}, {"^", "|"}}, out);
}

void sites_o4(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  binary_swaps(u, m, {{"==", "="}}, out);
}

// ---- Declaration ----

void sites_d1(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  const auto used = used_names(m);
  const auto ports = port_set(m);
  for (const auto& item : m.items) {
    const auto* d = std::get_if<Declaration>(&item);
    if (!d || d->is_port()) continue;
    const bool internal_and_used = std::all_of(d->names.begin(), d->names.end(), [&](const auto& dn) {
      return !ports.count(dn.name) && used.count(dn.name);
    });
    if (!internal_and_used) continue;
    const size_t begin = line_start(u.source, d->span.begin);
    const size_t end = begin == d->span.begin ? d->span.end : through_line_end(u.source, d->span.end);
    add(out, begin, end, "");
  }
}

void sites_d2(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  const auto driven = continuously_driven(m);
  auto decl = [&](const Declaration& d) {
    if (d.type_span.size() > 0) {
      if (d.type == NetType::kReg) add(out, d.type_span.begin, d.type_span.end, "wire");
      if (d.type == NetType::kWire) add(out, d.type_span.begin, d.type_span.end, "reg");
      return;
    }
    if (d.direction != Direction::kOutput) return;
    const bool assigned = std::any_of(d.names.begin(), d.names.end(),
                                      [&](const auto& dn) { return driven.count(dn.name) > 0; });
    if (assigned) add(out, d.keyword_span.end, d.keyword_span.end, " reg");
  };
  (void)u;
  for (const auto& d : m.ansi_ports) decl(d);
  for (const auto& item : m.items) {
    if (const auto* d = std::get_if<Declaration>(&item)) decl(*d);
  }
}

void sites_d3(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  for (const auto& item : m.items) {
    const auto* d = std::get_if<Declaration>(&item);
    if (!d || d->is_port()) continue;
    const std::string text(u.source.substr(d->span.begin, d->span.size()));
    add(out, d->span.end, d->span.end, "\n" + indentation_at(u.source, d->span.begin) + text);
  }
  if (!m.ansi) return;
  const size_t at = m.header_span.end;
  for (const auto& d : m.ansi_ports) {
    for (const auto& dn : d.names) {
      const std::string type = d.type == NetType::kReg ? "reg" : "wire";
      std::string range;
      if (d.range) range = " " + std::string(u.source.substr(d.range->span.begin, d.range->span.size()));
      add(out, at, at, "\n  " + type + range + " " + dn.name + ";");
    }
  }
}

void sites_d4(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  (void)u;
  if (m.ansi && !m.ansi_ports.empty()) {
    const Declaration& first = m.ansi_ports.front();
    // Delete the direction keyword and the blanks that follow it.
    size_t end = first.keyword_span.end;
    while (end < u.source.size() && (u.source[end] == ' ' || u.source[end] == '\t')) ++end;
    if (first.is_port()) add(out, first.keyword_span.begin, end, "");
  }
  auto decl = [&](const Declaration& d) {
    if (d.direction == Direction::kOutput) {
      add(out, d.keyword_span.begin, d.keyword_span.end, "input");
    }
  };
  for (const auto& d : m.ansi_ports) decl(d);
  for (const auto& item : m.items) {
    if (const auto* d = std::get_if<Declaration>(&item)) decl(*d);
  }
}

// ---- Structural ----

void sites_s1(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  const Token* endmodule = nullptr;
  for (const Token& t : u.tokens) {
    if (t.span.end == m.span.end && t.is(TokenKind::kKeyword, "endmodule")) endmodule = &t;
  }
  if (!endmodule) return;
  for (const auto& item : m.items) {
    const auto* ca = std::get_if<ContinuousAssign>(&item);
    if (!ca) continue;
    const std::string stmt(u.source.substr(ca->span.begin, ca->span.size()));
    const size_t begin = line_start(u.source, ca->span.begin);
    std::string between(u.source.substr(ca->span.end, endmodule->span.begin - ca->span.end));
    if (begin != ca->span.begin && !between.empty() && between.front() == '\n') {
      between.erase(0, 1);
    }
    add(out, begin, endmodule->span.end, between + "endmodule\n" + stmt);
  }
}

void sites_s2(const SourceUnit& u, const Module& m, std::vector<Site>& out) {
  std::set<std::string> procedural_done;
  for (const auto& item : m.items) {
    if (const auto* ca = std::get_if<ContinuousAssign>(&item)) {
      for (const auto& a : ca->assigns) {
        const std::string text = "assign " + verilog::print_expr(a.lhs) + " = " +
                                 verilog::print_expr(conflicting_rhs(a.rhs)) + ";";
        add(out, ca->span.end, ca->span.end,
            "\n" + indentation_at(u.source, ca->span.begin) + text);
      }
    } else if (const auto* al = std::get_if<Always>(&item)) {
      verilog::for_each_stmt(al->body, [&](const Stmt& s) {
        if (s.kind != StmtKind::kBlockingAssign && s.kind != StmtKind::kNonblockingAssign) return;
        if (s.lhs.kind != ExprKind::kIdentifier) return;
        if (!procedural_done.insert(s.lhs.text).second) return;
        const std::string text = "assign " + s.lhs.text + " = " +
                                  verilog::print_expr(conflicting_rhs(s.rhs)) + ";";
        add(out, al->span.end, al->span.end,
            "\n" + indentation_at(u.source, al->span.begin) + text);
      });
    }
  }
}

struct RuleEntry {
  MutationRule rule;
  SiteFn fn;
};

const std::vector<RuleEntry>& rule_table() {
  static const std::vector<RuleEntry> kRules = {
      {{"P1", Family::kPunctuation, "missing semicolon"}, sites_p1},
      {{"P2", Family::kPunctuation, "missing comma in list"}, sites_p2},
      {{"P3", Family::kPunctuation, "extra trailing comma"}, sites_p3},
      {{"P4", Family::kPunctuation, "missing colon in width specifier"}, sites_p4},
      {{"K1", Family::kKeyword, "keyword typo"}, sites_k1},
      {{"K2", Family::kKeyword, "block delimiter mismatch"}, sites_k2},
      {{"K3", Family::kKeyword, "parentheses, brackets or braces mismatch"}, sites_k3},
      {{"O1", Family::kOperator, "assignment operator confusion"}, sites_o1},
      {{"O2", Family::kOperator, "logical operator misuse"}, sites_o2},
      {{"O3", Family::kOperator, "bitwise operator misuse"}, sites_o3},
      {{"O4", Family::kOperator, "equality operator confusion"}, sites_o4},
      {{"D1", Family::kDeclaration, "missing signal declaration"}, sites_d1},
      {{"D2", Family::kDeclaration, "incorrect signal type declaration"}, sites_d2},
      {{"D3", Family::kDeclaration, "repeated signal declaration"}, sites_d3},
      {{"D4", Family::kDeclaration, "missing or incorrect port direction"}, sites_d4},
      {{"S1", Family::kStructural, "assign statement outside module scope"}, sites_s1},
      {{"S2", Family::kStructural, "multiple drivers for the same signal"}, sites_s2},
  };
  return kRules;
}

const RuleEntry& entry_for(const MutationRule& rule) {
  for (const auto& e : rule_table()) {
    if (e.rule.id == rule.id) return e;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown mutation rule '" + rule.id + "'");
}

Mutant make_mutant(const SourceUnit& anchor, const std::string& rule_id, const Site& site,
                   uint64_t seed) {
  Mutant m;
  m.record.rule_id = rule_id;
  m.record.site = site.span;
  m.record.original_text = anchor.source.substr(site.span.begin, site.span.size());
  m.record.mutated_text = site.replacement;
  m.record.seed = seed;
  m.source = apply_record(anchor.source, m.record);
  return m;
}

std::vector<Mutant> select(const SourceUnit& anchor,
                           const std::vector<std::pair<std::string, Site>>& candidates,
                           uint64_t stream, uint64_t seed, size_t max_variants) {
  if (max_variants == 0) throw Error(ErrorCode::kInvalidArgument, "max_variants must be >= 1");
  // Distinct mutant texts only; the first site producing a text wins.
  std::vector<Mutant> distinct;
  std::set<std::string> seen;
  for (const auto& [rule_id, site] : candidates) {
    Mutant m = make_mutant(anchor, rule_id, site, seed);
    if (m.source == anchor.source || !seen.insert(m.source).second) continue;
    distinct.push_back(std::move(m));
  }
  if (distinct.size() <= max_variants) return distinct;
  Rng rng(derive_seed(seed, stream));
  std::vector<Mutant> out;
  for (size_t i : rng.sample_without_replacement(distinct.size(), max_variants)) {
    out.push_back(std::move(distinct[i]));
  }
  return out;
}

void require_valid(const SourceUnit& anchor) {
  if (anchor.has_errors() || anchor.modules.empty()) {
    throw Error(ErrorCode::kAnchorInvalid, "anchor has parse errors");
  }
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kPunctuation: return "punctuation";
    case Family::kKeyword: return "keyword";
    case Family::kOperator: return "operator";
    case Family::kDeclaration: return "declaration";
    case Family::kStructural: return "structural";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::kPunctuation, Family::kKeyword, Family::kOperator,
                   Family::kDeclaration, Family::kStructural}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

const std::vector<MutationRule>& list_rules() {
  static const std::vector<MutationRule> kList = [] {
    std::vector<MutationRule> v;
    for (const auto& e : rule_table()) v.push_back(e.rule);
    return v;
  }();
  return kList;
}

const MutationRule& find_rule(std::string_view id) {
  for (const auto& r : list_rules()) {
    if (r.id == id) return r;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown mutation rule '" + std::string(id) + "'");
}

std::vector<const MutationRule*> rules_in_family(Family f) {
  std::vector<const MutationRule*> out;
  for (const auto& r : list_rules()) {
    if (r.family == f) out.push_back(&r);
  }
  return out;
}

bool statically_invalid(std::string_view rule_id) {
  return rule_id.starts_with('P') || rule_id.starts_with('K') || rule_id == "D1" ||
         rule_id == "D4" || rule_id == "S1";
}

std::vector<Site> enumerate_sites(const SourceUnit& anchor, const MutationRule& rule) {
  require_valid(anchor);
  const RuleEntry& entry = entry_for(rule);
  std::vector<Site> sites;
  for (const auto& m : anchor.modules) entry.fn(anchor, m, sites);
  std::stable_sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    return a.span.begin < b.span.begin;
  });
  return sites;
}

std::vector<Mutant> mutate(const SourceUnit& anchor, const MutationRule& rule, uint64_t seed,
                           size_t max_variants) {
  std::vector<std::pair<std::string, Site>> candidates;
  for (auto& s : enumerate_sites(anchor, rule)) candidates.emplace_back(rule.id, std::move(s));
  return select(anchor, candidates, fnv1a(rule.id), seed, max_variants);
}

std::vector<Mutant> mutate_family(const SourceUnit& anchor, Family family, uint64_t seed,
                                  size_t max_variants) {
  std::vector<std::pair<std::string, Site>> candidates;
  for (const MutationRule* r : rules_in_family(family)) {
    for (auto& s : enumerate_sites(anchor, *r)) candidates.emplace_back(r->id, std::move(s));
  }
  return select(anchor, candidates, fnv1a(family_name(family)), seed, max_variants);
}

std::string apply_record(std::string_view anchor, const MutationRecord& record) {
  if (record.site.end > anchor.size() || record.site.begin > record.site.end) {
    throw Error(ErrorCode::kInvalidArgument, "mutation site outside the anchor");
  }
  if (anchor.substr(record.site.begin, record.site.size()) != record.original_text) {
    throw Error(ErrorCode::kInvalidArgument, "mutation record does not match the anchor");
  }
  std::string out(anchor.substr(0, record.site.begin));
  out += record.mutated_text;
  out += anchor.substr(record.site.end);
  return out;
}

std::optional<DiffHunk> diff_hunk(std::string_view a, std::string_view b) {
  if (a == b) return std::nullopt;
  size_t prefix = 0;
  while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
  size_t suffix = 0;
  while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
         a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
    ++suffix;
  }
  return DiffHunk{{prefix, a.size() - suffix}, {prefix, b.size() - suffix}};
}

}  // namespace forge::mutation
