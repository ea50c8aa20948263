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

#ifndef FORGE_VERILOG_LEXER_H_
#define FORGE_VERILOG_LEXER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace forge::verilog {

// Half-open byte range [begin, end) into the source text.
struct Span {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

enum class TokenKind {
  kKeyword,
  kIdentifier,
  kPunctuation,
  kOperator,
  kNumericLiteral,
  kWhitespace,
  kComment,
};

std::string_view token_kind_name(TokenKind kind);

struct Token {
  std::string text;
  TokenKind kind = TokenKind::kWhitespace;
  Span span;

  bool is_trivia() const {
    return kind == TokenKind::kWhitespace || kind == TokenKind::kComment;
  }
  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool operator==(const Token&) const = default;
};

enum class Severity { kError, kWarning };

struct ParseDiagnostic {
  std::string message;
  Span span;
  Severity severity = Severity::kError;
};

bool is_keyword(std::string_view word);

// Total function: every byte of `source` lands in exactly one token.
std::vector<Token> lex(std::string_view source);

// Same as lex(), additionally reporting unknown characters and unterminated
// block comments as warnings.
std::vector<Token> lex(std::string_view source,
                       std::vector<ParseDiagnostic>& warnings);

// True iff the last non-trivia token is ";" or one of the keywords "end",
// "endcase", "endmodule".
bool classify_boundary(const std::vector<Token>& tokens);

}  // namespace forge::verilog

#endif  // FORGE_VERILOG_LEXER_H_
