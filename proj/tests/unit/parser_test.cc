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

#include <gtest/gtest.h>

#include <set>
#include <string>

#include "forge/verilog/printer.h"
#include "forge/verilog/semantic.h"
#include "support/corpus.h"

namespace forge::verilog {
namespace {

const char* const kCorpus[] = {
    "and_gate", "or_gate",   "not_gate", "xor_gate",    "half_adder",
    "full_adder", "comparator", "mux",   "decoder",     "encoder",
    "d_flip_flop", "counter", "ram",     "rom",         "traffic_light_controller"};

TEST(ParserTest, FullAdderParsesClean) {
  SourceUnit unit = parse(testing::corpus_source("full_adder"));
  EXPECT_EQ(unit.error_count(), 0u);
  ASSERT_EQ(unit.modules.size(), 1u);
  const Module& m = unit.modules[0];
  EXPECT_EQ(m.name, "full_adder");
  EXPECT_EQ(m.port_names(),
            (std::vector<std::string>{"a", "b", "cin", "sum", "cout"}));
}

TEST(ParserTest, MissingSemicolonIsError) {
  SourceUnit unit = parse("module m(input a, input b, output y);\n"
                          "  assign y = a & b\n"
                          "endmodule\n");
  EXPECT_GE(unit.error_count(), 1u);
  // Partial AST still carries the module.
  ASSERT_EQ(unit.modules.size(), 1u);
  EXPECT_EQ(unit.modules[0].name, "m");
}

TEST(ParserTest, AssignAfterEndmoduleIsError) {
  SourceUnit unit = parse("module m(input a, input b, output y);\n"
                          "endmodule\n"
                          "assign y = a & b;\n");
  EXPECT_GE(unit.error_count(), 1u);
}

TEST(ParserTest, MixedHeaderStylesRejected) {
  EXPECT_TRUE(parse("module m(a, input b, output y); endmodule").has_errors());
  EXPECT_TRUE(parse("module m(input a, b, output y,); endmodule").has_errors());
}

TEST(ParserTest, NonAnsiHeader) {
  SourceUnit unit = parse(
      "module m(a, y);\n  input a;\n  output y;\n  reg y;\n"
      "  always @(a) y = ~a;\nendmodule\n");
  EXPECT_FALSE(unit.has_errors());
  EXPECT_TRUE(check_declarations(unit).empty());
}

TEST(ParserTest, OperatorPrecedence) {
  SourceUnit unit = parse(
      "module m(input a, input b, input c, output y);\n"
      "  assign y = a | b & c ? a + b * c : a == b;\nendmodule\n");
  ASSERT_FALSE(unit.has_errors());
  const auto& assign = std::get<ContinuousAssign>(unit.modules[0].items[0]);
  EXPECT_EQ(print_expr(assign.assigns[0].rhs),
            "(a | (b & c)) ? (a + (b * c)) : (a == b)");
}

TEST(ParserTest, UnsupportedConstructsDiagnosed) {
  EXPECT_TRUE(parse("module m; initial begin end endmodule").has_errors());
  EXPECT_TRUE(parse("module m; sub u0(.a(b)); endmodule").has_errors());
  EXPECT_TRUE(parse("module m(input a);").has_errors());  // no endmodule
}

TEST(ParserTest, CorpusParsesCleanAndRoundTrips) {
  for (const char* name : kCorpus) {
    SCOPED_TRACE(name);
    FrontendCheck check = check_source(testing::corpus_source(name));
    EXPECT_TRUE(check.ok()) << check.summary();
    const std::string printed = print_modules(check.unit.modules);
    SourceUnit reparsed = parse(printed);
    EXPECT_FALSE(reparsed.has_errors()) << printed;
    EXPECT_EQ(reparsed.modules, check.unit.modules) << printed;
    // Printing is a fixed point after one round.
    EXPECT_EQ(print_modules(reparsed.modules), printed);
  }
}

// Every span recorded on the AST starts at a token start and ends at a
// token end.
void check_span(const SourceUnit& unit, Span span, const std::set<size_t>& starts,
                const std::set<size_t>& ends) {
  if (span.begin == 0 && span.end == 0) return;
  EXPECT_TRUE(starts.count(span.begin)) << span.begin;
  EXPECT_TRUE(ends.count(span.end)) << span.end;
  EXPECT_LE(span.end, unit.source.size());
}

void check_expr_spans(const SourceUnit& unit, const Expr& e,
                      const std::set<size_t>& s, const std::set<size_t>& en) {
  check_span(unit, e.span, s, en);
  for (const auto& a : e.args) check_expr_spans(unit, a, s, en);
}

TEST(ParserTest, SpansAlignWithTokens) {
  for (const char* name : kCorpus) {
    SCOPED_TRACE(name);
    SourceUnit unit = parse(testing::corpus_source(name));
    std::set<size_t> starts, ends;
    for (const auto& t : unit.tokens) {
      starts.insert(t.span.begin);
      ends.insert(t.span.end);
    }
    for (const auto& m : unit.modules) {
      check_span(unit, m.span, starts, ends);
      check_span(unit, m.header_span, starts, ends);
      for (const auto& item : m.items) {
        check_span(unit, item_span(item), starts, ends);
        if (const auto* a = std::get_if<ContinuousAssign>(&item)) {
          for (const auto& as : a->assigns) {
            check_expr_spans(unit, as.lhs, starts, ends);
            check_expr_spans(unit, as.rhs, starts, ends);
          }
        }
        if (const auto* al = std::get_if<Always>(&item)) {
          for_each_stmt(al->body, [&](const Stmt& s) {
            check_span(unit, s.span, starts, ends);
          });
        }
      }
    }
  }
}

TEST(ParserTest, Deterministic) {
  const std::string src = testing::corpus_source("traffic_light_controller");
  EXPECT_EQ(parse(src).modules, parse(src).modules);
}

TEST(SemanticTest, DeclarationErrors) {
  auto bad = [](const char* src) { return !check_source(src).ok(); };
  EXPECT_TRUE(bad("module m(input a, output y); assign y = a & b; endmodule"));
  EXPECT_TRUE(bad("module m(input a, output reg y); assign y = a; endmodule"));
  EXPECT_TRUE(bad("module m(input a, output y); always @(*) y = a; endmodule"));
  EXPECT_TRUE(bad("module m(input a, output y); wire a; assign y = a; endmodule"));
  EXPECT_TRUE(bad("module m(input a, output y); wire w; wire w; assign w = a; assign y = w; endmodule"));
  EXPECT_TRUE(bad("module m(input a, input b, output y); assign y = a; assign y = b; endmodule"));
  EXPECT_TRUE(bad("module m(input reg a, output y); assign y = a; endmodule"));
  EXPECT_TRUE(bad("module m(input a, output y); assign a = 1'b0; assign y = a; endmodule"));
  EXPECT_TRUE(bad("module m(a, y); input a; assign y = a; endmodule"));
  EXPECT_FALSE(bad("module m(input [1:0] a, output [1:0] y); assign y[0] = a[1]; assign y[1] = a[0]; endmodule"));
}

TEST(SemanticTest, Literals) {
  EXPECT_EQ(parse_literal("4'b1010")->value, 10u);
  EXPECT_EQ(parse_literal("4'b1010")->width, 4);
  EXPECT_EQ(parse_literal("8'hFF")->value, 255u);
  EXPECT_EQ(parse_literal("12")->value, 12u);
  EXPECT_FALSE(parse_literal("12")->sized);
  EXPECT_EQ(parse_literal("'d7")->value, 7u);
  EXPECT_EQ(parse_literal("3'd9")->value, 1u);  // truncated to 3 bits
  EXPECT_FALSE(parse_literal("4'b102").has_value());
}

}  // namespace
}  // namespace forge::verilog
