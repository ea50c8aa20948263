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

#include "forge/verilog/parser.h"

#include <utility>

namespace forge::verilog {
namespace {

struct ParseFailure {
  std::string message;
  Span span;
};

class Parser {
 public:
  explicit Parser(SourceUnit& unit) : unit_(unit) {
    for (size_t i = 0; i < unit.tokens.size(); ++i) {
      if (!unit.tokens[i].is_trivia()) sig_.push_back(i);
    }
  }

  void run() {
    while (!at_end()) {
      if (is_kw("module")) {
        parse_module();
        continue;
      }
      const Token& t = peek();
      const std::string what = t.kind == TokenKind::kKeyword
                                   ? "'" + t.text + "' outside module scope"
                                   : "unexpected '" + t.text + "' outside module scope";
      error(what, t.span);
      while (!at_end() && !is_kw("module")) advance();
    }
  }

 private:
  // ---- token cursor -------------------------------------------------------

  bool at_end() const { return pos_ >= sig_.size(); }
  const Token& peek(size_t ahead = 0) const {
    static const Token kEof{"", TokenKind::kWhitespace, {}};
    if (pos_ + ahead >= sig_.size()) return kEof;
    return unit_.tokens[sig_[pos_ + ahead]];
  }
  Span eof_span() const {
    const size_t n = unit_.source.size();
    return {n, n};
  }
  Span cur_span() const { return at_end() ? eof_span() : peek().span; }
  const Token& advance() {
    const Token& t = peek();
    last_end_ = t.span.end;
    ++pos_;
    return t;
  }
  bool is_kw(std::string_view k, size_t ahead = 0) const {
    return peek(ahead).is(TokenKind::kKeyword, k);
  }
  bool is_punct(std::string_view p, size_t ahead = 0) const {
    return peek(ahead).is(TokenKind::kPunctuation, p);
  }
  bool is_op(std::string_view o, size_t ahead = 0) const {
    return peek(ahead).is(TokenKind::kOperator, o);
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    advance();
    return true;
  }
  bool accept_kw(std::string_view k) {
    if (!is_kw(k)) return false;
    advance();
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const std::string got = at_end() ? "end of input" : "'" + peek().text + "'";
    throw ParseFailure{msg + ", found " + got, cur_span()};
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }
  void expect_kw(std::string_view k) {
    if (!accept_kw(k)) fail("expected '" + std::string(k) + "'");
  }
  std::string expect_identifier() {
    if (peek().kind != TokenKind::kIdentifier || at_end()) {
      fail("expected identifier");
    }
    return advance().text;
  }

  void error(const std::string& msg, Span span) {
    unit_.diagnostics.push_back({msg, span, Severity::kError});
  }

  // Skips to just past the next ';' or to the next token that can start a
  // module item.
  void synchronize() {
    // Always make progress past the token that failed.
    if (!at_end() && !is_kw("endmodule") && !is_kw("module")) {
      if (accept_punct(";")) return;
      advance();
    }
    while (!at_end()) {
      if (accept_punct(";")) return;
      if (is_item_start() || is_kw("endmodule") || is_kw("module")) return;
      advance();
    }
  }

  bool is_item_start() const {
    static constexpr std::string_view kStarts[] = {
        "assign", "always",   "wire",       "reg",    "integer", "input",
        "output", "inout",    "parameter",  "localparam", "initial"};
    for (auto k : kStarts) {
      if (is_kw(k)) return true;
    }
    return false;
  }

  // ---- modules ------------------------------------------------------------

  void parse_module() {
    Module m;
    const size_t begin = peek().span.begin;
    advance();  // module
    bool header_ok = true;
    try {
      m.name = expect_identifier();
      if (accept_punct("#")) {
        expect_punct("(");
        parse_header_params(m);
        expect_punct(")");
      }
      if (is_punct("(")) {
        const Span open = advance().span;
        parse_port_list(m);
        m.port_list_span = {open.end, peek().span.begin};
        expect_punct(")");
      }
      expect_punct(";");
    } catch (const ParseFailure& f) {
      error(f.message, f.span);
      header_ok = false;
      // Resume at the first plausible item start.
      while (!at_end() && !is_item_start() && !is_kw("endmodule") &&
             !is_kw("module")) {
        if (accept_punct(";")) break;
        advance();
      }
    }
    m.header_span = {begin, last_end_};
    (void)header_ok;

    while (true) {
      if (at_end()) {
        error("missing 'endmodule'", eof_span());
        break;
      }
      if (is_kw("endmodule")) {
        advance();
        break;
      }
      if (is_kw("module")) {
        error("missing 'endmodule' before nested 'module'", peek().span);
        break;
      }
      try {
        parse_item(m);
      } catch (const ParseFailure& f) {
        error(f.message, f.span);
        synchronize();
      }
    }
    m.span = {begin, last_end_};
    unit_.modules.push_back(std::move(m));
  }

  void parse_header_params(Module& m) {
    // #(parameter A = 1, B = 2, parameter C = 3)
    ParamDecl cur;
    const size_t begin = peek().span.begin;
    bool first = true;
    while (true) {
      if (accept_kw("parameter")) {
        if (!first) {
          cur.span = {cur.span.begin, last_end_};
          m.header_params.push_back(std::move(cur));
          cur = ParamDecl{};
        }
        cur.span.begin = begin;
        if (is_punct("[")) cur.range = parse_range();
      } else if (first) {
        cur.span.begin = begin;
      }
      first = false;
      cur.params.push_back(parse_param_assign());
      cur.span.end = last_end_;
      if (!accept_punct(",")) break;
    }
    m.header_params.push_back(std::move(cur));
  }

  ParamAssign parse_param_assign() {
    ParamAssign p;
    p.span.begin = peek().span.begin;
    p.name = expect_identifier();
    if (!is_op("=")) fail("expected '=' in parameter assignment");
    advance();
    p.value = parse_expr();
    p.span.end = last_end_;
    return p;
  }

  static Direction direction_of(const Token& t) {
    if (t.kind != TokenKind::kKeyword) return Direction::kNone;
    if (t.text == "input") return Direction::kInput;
    if (t.text == "output") return Direction::kOutput;
    if (t.text == "inout") return Direction::kInout;
    return Direction::kNone;
  }

  void parse_port_list(Module& m) {
    if (is_punct(")")) return;
    if (direction_of(peek()) == Direction::kNone) {
      m.ansi = false;
      while (true) {
        if (direction_of(peek()) != Direction::kNone) {
          fail("port direction mixed into a non-ANSI port list");
        }
        m.port_list.push_back(expect_identifier());
        if (!accept_punct(",")) return;
      }
    }
    m.ansi = true;
    while (true) {
      if (direction_of(peek()) != Direction::kNone) {
        m.ansi_ports.push_back(parse_decl_head());
      } else if (m.ansi_ports.empty()) {
        fail("expected port direction");
      }
      Declaration& d = m.ansi_ports.back();
      Declarator dn;
      dn.span.begin = peek().span.begin;
      dn.name_span = peek().span;
      dn.name = expect_identifier();
      dn.span.end = last_end_;
      d.names.push_back(std::move(dn));
      d.span.end = last_end_;
      if (!accept_punct(",")) return;
    }
  }

  // direction [wire|reg] [signed] [range]  or  wire|reg|integer [signed] [range]
  Declaration parse_decl_head() {
    Declaration d;
    d.span.begin = peek().span.begin;
    d.direction = direction_of(peek());
    if (d.direction != Direction::kNone) {
      d.keyword_span = advance().span;
    }
    if (is_kw("wire") || is_kw("reg") || is_kw("integer")) {
      const Token& t = advance();
      d.type = t.text == "wire" ? NetType::kWire
               : t.text == "reg" ? NetType::kReg
                                 : NetType::kInteger;
      d.type_span = t.span;
      if (d.direction == Direction::kNone) d.keyword_span = t.span;
    }
    if (accept_kw("signed")) d.is_signed = true;
    if (is_punct("[")) d.range = parse_range();
    d.span.end = last_end_;
    return d;
  }

  Range parse_range() {
    Range r;
    r.span.begin = peek().span.begin;
    expect_punct("[");
    r.msb = parse_expr();
    expect_punct(":");
    r.lsb = parse_expr();
    expect_punct("]");
    r.span.end = last_end_;
    return r;
  }

  void parse_item(Module& m) {
    const Token& t = peek();
    if (t.kind == TokenKind::kKeyword) {
      if (t.text == "input" || t.text == "output" || t.text == "inout") {
        if (m.ansi && !m.ansi_ports.empty()) {
          fail("port declaration in body of a module with an ANSI header");
        }
        m.items.emplace_back(parse_declaration());
        return;
      }
      if (t.text == "wire" || t.text == "reg" || t.text == "integer") {
        m.items.emplace_back(parse_declaration());
        return;
      }
      if (t.text == "parameter" || t.text == "localparam") {
        m.items.emplace_back(parse_param_decl());
        return;
      }
      if (t.text == "assign") {
        m.items.emplace_back(parse_assign());
        return;
      }
      if (t.text == "always") {
        m.items.emplace_back(parse_always());
        return;
      }
      fail("unsupported module item '" + t.text + "'");
    }
    fail("expected module item");
  }

  Declaration parse_declaration() {
    Declaration d = parse_decl_head();
    while (true) {
      Declarator dn;
      dn.span.begin = peek().span.begin;
      dn.name_span = peek().span;
      dn.name = expect_identifier();
      if (is_punct("[")) dn.array = parse_range();
      if (is_op("=")) {
        if (d.is_port()) fail("initializer on port declaration");
        advance();
        dn.init = parse_expr();
      }
      dn.span.end = last_end_;
      d.names.push_back(std::move(dn));
      if (!accept_punct(",")) break;
    }
    expect_punct(";");
    d.span.end = last_end_;
    return d;
  }

  ParamDecl parse_param_decl() {
    ParamDecl p;
    p.span.begin = peek().span.begin;
    p.local = advance().text == "localparam";
    if (is_punct("[")) p.range = parse_range();
    while (true) {
      p.params.push_back(parse_param_assign());
      if (!accept_punct(",")) break;
    }
    expect_punct(";");
    p.span.end = last_end_;
    return p;
  }

  ContinuousAssign parse_assign() {
    ContinuousAssign a;
    a.span.begin = peek().span.begin;
    advance();  // assign
    while (true) {
      Assignment as;
      as.span.begin = peek().span.begin;
      as.lhs = parse_lvalue();
      if (!is_op("=")) fail("expected '=' in continuous assignment");
      advance();
      as.rhs = parse_expr();
      as.span.end = last_end_;
      a.assigns.push_back(std::move(as));
      if (!accept_punct(",")) break;
    }
    expect_punct(";");
    a.span.end = last_end_;
    return a;
  }

  Always parse_always() {
    Always a;
    a.span.begin = peek().span.begin;
    advance();  // always
    if (!accept_punct("@")) fail("expected '@' after 'always'");
    if (is_op("*")) {
      advance();
      a.star = true;
    } else {
      expect_punct("(");
      if (is_op("*")) {
        advance();
        a.star = true;
      } else {
        while (true) {
          SensitivityItem s;
          if (accept_kw("posedge")) {
            s.edge = Edge::kPosedge;
          } else if (accept_kw("negedge")) {
            s.edge = Edge::kNegedge;
          }
          s.signal = parse_primary();
          a.sensitivity.push_back(std::move(s));
          if (accept_kw("or") || accept_punct(",")) continue;
          break;
        }
      }
      expect_punct(")");
    }
    a.body = parse_stmt();
    a.span.end = last_end_;
    return a;
  }

  // ---- statements ---------------------------------------------------------

  Stmt parse_stmt() {
    Stmt s;
    s.span.begin = peek().span.begin;
    if (accept_kw("begin")) {
      s.kind = StmtKind::kBlock;
      if (accept_punct(":")) s.keyword = expect_identifier();
      while (!is_kw("end")) {
        if (at_end()) fail("expected 'end'");
        if (is_kw("endmodule") || is_kw("endcase") || is_item_start()) {
          fail("expected 'end'");
        }
        s.body.push_back(parse_stmt());
      }
      advance();
    } else if (accept_kw("if")) {
      s.kind = StmtKind::kIf;
      expect_punct("(");
      s.rhs = parse_expr();
      expect_punct(")");
      s.body.push_back(parse_stmt());
      if (accept_kw("else")) s.body.push_back(parse_stmt());
    } else if (is_kw("case") || is_kw("casez") || is_kw("casex")) {
      s.kind = StmtKind::kCase;
      s.keyword = advance().text;
      expect_punct("(");
      s.rhs = parse_expr();
      expect_punct(")");
      while (!is_kw("endcase")) {
        if (at_end() || is_kw("end") || is_kw("endmodule") || is_item_start()) {
          fail("expected 'endcase'");
        }
        CaseItem item;
        item.span.begin = peek().span.begin;
        if (accept_kw("default")) {
          item.is_default = true;
          accept_punct(":");
        } else {
          while (true) {
            item.labels.push_back(parse_expr());
            if (!accept_punct(",")) break;
          }
          expect_punct(":");
        }
        item.body = parse_stmt();
        item.span.end = last_end_;
        s.items.push_back(std::move(item));
      }
      advance();
    } else if (accept_punct(";")) {
      s.kind = StmtKind::kNull;
    } else if (peek().kind == TokenKind::kIdentifier || is_punct("{")) {
      s.lhs = parse_lvalue();
      if (is_op("=")) {
        s.kind = StmtKind::kBlockingAssign;
      } else if (is_op("<=")) {
        s.kind = StmtKind::kNonblockingAssign;
      } else {
        fail("expected '=' or '<=' in procedural assignment");
      }
      advance();
      s.rhs = parse_expr();
      expect_punct(";");
    } else {
      fail("expected statement");
    }
    s.span.end = last_end_;
    return s;
  }

  Expr parse_lvalue() {
    if (is_punct("{")) return parse_primary();
    if (peek().kind != TokenKind::kIdentifier) fail("expected assignment target");
    return parse_primary();
  }

  // ---- expressions --------------------------------------------------------

  static int binary_precedence(const Token& t) {
    if (t.kind != TokenKind::kOperator) return -1;
    const std::string& o = t.text;
    if (o == "||") return 1;
    if (o == "&&") return 2;
    if (o == "|" || o == "~|") return 3;
    if (o == "^" || o == "~^" || o == "^~") return 4;
    if (o == "&" || o == "~&") return 5;
    if (o == "==" || o == "!=" || o == "===" || o == "!==") return 6;
    if (o == "<" || o == "<=" || o == ">" || o == ">=") return 7;
    if (o == "<<" || o == ">>" || o == "<<<" || o == ">>>") return 8;
    if (o == "+" || o == "-") return 9;
    if (o == "*" || o == "/" || o == "%") return 10;
    if (o == "**") return 11;
    return -1;
  }

  Expr parse_expr() {
    const size_t begin = peek().span.begin;
    Expr cond = parse_binary(1);
    if (!is_op("?")) return cond;
    advance();
    Expr a = parse_expr();
    expect_punct(":");
    Expr b = parse_expr();
    Expr t = Expr::ternary(std::move(cond), std::move(a), std::move(b));
    t.span = {begin, last_end_};
    return t;
  }

  Expr parse_binary(int min_prec) {
    const size_t begin = peek().span.begin;
    Expr lhs = parse_unary();
    while (true) {
      const int prec = binary_precedence(peek());
      if (prec < min_prec) return lhs;
      std::string op = advance().text;
      // '**' is right-associative; everything else is left-associative.
      Expr rhs = parse_binary(op == "**" ? prec : prec + 1);
      lhs = Expr::binary(std::move(op), std::move(lhs), std::move(rhs));
      lhs.span = {begin, last_end_};
    }
  }

  Expr parse_unary() {
    const Token& t = peek();
    if (t.kind == TokenKind::kOperator) {
      static constexpr std::string_view kUnary[] = {
          "+", "-", "!", "~", "&", "~&", "|", "~|", "^", "~^", "^~"};
      for (auto u : kUnary) {
        if (t.text == u) {
          const size_t begin = t.span.begin;
          std::string op = advance().text;
          Expr e = Expr::unary(std::move(op), parse_unary());
          e.span = {begin, last_end_};
          return e;
        }
      }
    }
    return parse_primary();
  }

  Expr parse_primary() {
    const Token& t = peek();
    const size_t begin = t.span.begin;
    if (at_end()) fail("expected expression");
    if (t.kind == TokenKind::kNumericLiteral) {
      Expr e = Expr::number(advance().text);
      e.span = {begin, last_end_};
      return e;
    }
    if (t.kind == TokenKind::kIdentifier) {
      std::string name = advance().text;
      if (accept_punct("[")) {
        Expr first = parse_expr();
        Expr e;
        if (accept_punct(":")) {
          Expr second = parse_expr();
          e = Expr{ExprKind::kRangeSelect, std::move(name),
                   {std::move(first), std::move(second)}, {}};
        } else {
          e = Expr{ExprKind::kIndex, std::move(name), {std::move(first)}, {}};
        }
        expect_punct("]");
        e.span = {begin, last_end_};
        return e;
      }
      Expr e = Expr::identifier(std::move(name));
      e.span = {begin, last_end_};
      return e;
    }
    if (accept_punct("(")) {
      Expr e = parse_expr();
      expect_punct(")");
      return e;
    }
    if (accept_punct("{")) {
      Expr first = parse_expr();
      Expr e;
      if (accept_punct("{")) {
        // replication {n{a, b}}
        e.kind = ExprKind::kReplicate;
        e.args.push_back(std::move(first));
        while (true) {
          e.args.push_back(parse_expr());
          if (!accept_punct(",")) break;
        }
        expect_punct("}");
      } else {
        e.kind = ExprKind::kConcat;
        e.args.push_back(std::move(first));
        while (accept_punct(",")) e.args.push_back(parse_expr());
      }
      expect_punct("}");
      e.span = {begin, last_end_};
      return e;
    }
    fail("expected expression");
  }

  SourceUnit& unit_;
  std::vector<size_t> sig_;
  size_t pos_ = 0;
  size_t last_end_ = 0;
};

}  // namespace

SourceUnit parse(std::string_view source) {
  SourceUnit unit;
  unit.source = std::string(source);
  unit.tokens = lex(unit.source, unit.diagnostics);
  Parser(unit).run();
  return unit;
}

}  // namespace forge::verilog
