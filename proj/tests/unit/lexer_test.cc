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

#include "forge/verilog/lexer.h"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "forge/util/rng.h"

namespace forge::verilog {
namespace {

std::vector<Token> significant(const std::vector<Token>& tokens) {
  std::vector<Token> out;
  for (const auto& t : tokens) {
    if (!t.is_trivia()) out.push_back(t);
  }
  return out;
}

std::string concat(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t.text;
  return out;
}

TEST(LexerTest, ContinuousAssign) {
  auto tokens = lex("assign y = a & b;");
  auto sig = significant(tokens);
  ASSERT_EQ(sig.size(), 7u);
  EXPECT_TRUE(sig[0].is(TokenKind::kKeyword, "assign"));
  EXPECT_TRUE(sig[1].is(TokenKind::kIdentifier, "y"));
  EXPECT_TRUE(sig[2].is(TokenKind::kOperator, "="));
  EXPECT_TRUE(sig[3].is(TokenKind::kIdentifier, "a"));
  EXPECT_TRUE(sig[4].is(TokenKind::kOperator, "&"));
  EXPECT_TRUE(sig[5].is(TokenKind::kIdentifier, "b"));
  EXPECT_TRUE(sig[6].is(TokenKind::kPunctuation, ";"));
  // Whitespace tokens sit between the significant ones.
  EXPECT_EQ(tokens.size(), 12u);
  EXPECT_EQ(tokens[1].kind, TokenKind::kWhitespace);
}

TEST(LexerTest, EmptyInput) { EXPECT_TRUE(lex("").empty()); }

TEST(LexerTest, LongestMatchKeyword) {
  auto tokens = lex("endmodule");
  ASSERT_EQ(tokens.size(), 1u);
  EXPECT_TRUE(tokens[0].is(TokenKind::kKeyword, "endmodule"));
}

TEST(LexerTest, NumbersAndOperators) {
  auto sig = significant(lex("q <= 4'b1010 + 'hF >= 12 ~^ x;"));
  ASSERT_EQ(sig.size(), 10u);
  EXPECT_TRUE(sig[1].is(TokenKind::kOperator, "<="));
  EXPECT_TRUE(sig[2].is(TokenKind::kNumericLiteral, "4'b1010"));
  EXPECT_TRUE(sig[4].is(TokenKind::kNumericLiteral, "'hF"));
  EXPECT_TRUE(sig[5].is(TokenKind::kOperator, ">="));
  EXPECT_TRUE(sig[6].is(TokenKind::kNumericLiteral, "12"));
  EXPECT_TRUE(sig[7].is(TokenKind::kOperator, "~^"));
}

TEST(LexerTest, CommentsAreTrivia) {
  auto tokens = lex("a; // done\n/* block */ b");
  auto sig = significant(tokens);
  ASSERT_EQ(sig.size(), 3u);
  int comments = 0;
  for (const auto& t : tokens) comments += t.kind == TokenKind::kComment;
  EXPECT_EQ(comments, 2);
}

TEST(LexerTest, UnknownCharacterWarns) {
  std::vector<ParseDiagnostic> warnings;
  auto tokens = lex("a \x01 b", warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_EQ(warnings[0].severity, Severity::kWarning);
  EXPECT_EQ(significant(tokens)[1].kind, TokenKind::kPunctuation);
}

TEST(LexerTest, UnterminatedBlockCommentWarns) {
  std::vector<ParseDiagnostic> warnings;
  auto tokens = lex("a /* open", warnings);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_EQ(concat(tokens), "a /* open");
}

TEST(LexerTest, KeywordsOnlyFromFixedSet) {
  for (const auto& t : lex("module m; wire and_gate, endmodule_x; endmodule")) {
    if (t.kind == TokenKind::kKeyword) {
      EXPECT_TRUE(is_keyword(t.text)) << t.text;
    }
    if (t.kind == TokenKind::kIdentifier) {
      EXPECT_FALSE(is_keyword(t.text)) << t.text;
    }
  }
}

TEST(LexerTest, LosslessOnArbitraryBytes) {
  Rng rng(1234);
  const std::string alphabet =
      "abcdefgh_$019'bhxz ;,()[]{}:#@.+-*/%&|^~!<>=?\"\\`\n\t/*";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const size_t len = rng.below(80);
    for (size_t i = 0; i < len; ++i) {
      if (rng.bernoulli(0.05)) {
        s.push_back(static_cast<char>(rng.below(256)));
      } else {
        s.push_back(alphabet[rng.below(alphabet.size())]);
      }
    }
    auto tokens = lex(s);
    ASSERT_EQ(concat(tokens), s);
    size_t expect = 0;
    for (const auto& t : tokens) {
      ASSERT_EQ(t.span.begin, expect);
      ASSERT_EQ(t.span.size(), t.text.size());
      expect = t.span.end;
    }
    // Determinism.
    ASSERT_EQ(lex(s), tokens);
  }
}

TEST(BoundaryTest, Semicolon) {
  EXPECT_TRUE(classify_boundary(lex("assign y = a & b;")));
}

TEST(BoundaryTest, TrailingTriviaSkipped) {
  EXPECT_TRUE(classify_boundary(lex("assign y = a & b; //done\n")));
}

TEST(BoundaryTest, BeginIsNotBoundary) {
  EXPECT_FALSE(classify_boundary(lex("always @(*) begin")));
}

TEST(BoundaryTest, BlockKeywords) {
  EXPECT_TRUE(classify_boundary(lex("  end")));
  EXPECT_TRUE(classify_boundary(lex("  endcase\n")));
  EXPECT_TRUE(classify_boundary(lex("endmodule")));
  EXPECT_FALSE(classify_boundary(lex("endfunction")));
  EXPECT_FALSE(classify_boundary(lex("end_state")));
  EXPECT_FALSE(classify_boundary(lex("")));
  EXPECT_FALSE(classify_boundary(lex("// ;")));
}

}  // namespace
}  // namespace forge::verilog
