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

#include <algorithm>
#include <array>
#include <cctype>

namespace forge::verilog {
namespace {

constexpr auto kKeywords = std::to_array<std::string_view>({
    "always",   "and",       "assign",     "begin",     "buf",
    "case",     "casex",     "casez",      "default",   "else",
    "end",      "endcase",   "endfunction", "endgenerate", "endmodule",
    "endtask",  "for",       "forever",    "function",  "generate",
    "genvar",   "if",        "initial",    "inout",     "input",
    "integer",  "localparam", "module",    "nand",      "negedge",
    "nor",      "not",       "or",         "output",    "parameter",
    "posedge",  "reg",       "repeat",     "signed",    "supply0",
    "supply1",  "task",      "tri",        "unsigned",  "while",
    "wire",     "xnor",      "xor",
});

// Longest match first.
constexpr auto kOperators = std::to_array<std::string_view>({
    "<<<", ">>>", "===", "!==", "==", "!=", "<=", ">=", "&&", "||", "<<",
    ">>",  "~&",  "~|",  "~^",  "^~", "**", "->", "+",  "-",  "*",  "/",
    "%",   "&",   "|",   "^",   "~",  "!",  "<",  ">",  "=",  "?",
});

constexpr std::string_view kPunct = ";,()[]{}:#@.";

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool based_digit(char c) {
  return std::isxdigit(static_cast<unsigned char>(c)) || c == '_' || c == 'x' ||
         c == 'X' || c == 'z' || c == 'Z' || c == '?';
}

// Length of a based literal tail starting at the apostrophe, or 0.
size_t based_tail(std::string_view s, size_t i) {
  if (i >= s.size() || s[i] != '\'') return 0;
  size_t j = i + 1;
  if (j < s.size() && (s[j] == 's' || s[j] == 'S')) ++j;
  if (j >= s.size()) return 0;
  const char b = static_cast<char>(std::tolower(static_cast<unsigned char>(s[j])));
  if (b != 'b' && b != 'o' && b != 'd' && b != 'h') return 0;
  ++j;
  const size_t digits_begin = j;
  while (j < s.size() && based_digit(s[j])) ++j;
  if (j == digits_begin) return 0;
  return j - i;
}

size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;
}

}  // namespace

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::kKeyword: return "Keyword";
    case TokenKind::kIdentifier: return "Identifier";
    case TokenKind::kPunctuation: return "Punctuation";
    case TokenKind::kOperator: return "Operator";
    case TokenKind::kNumericLiteral: return "NumericLiteral";
    case TokenKind::kWhitespace: return "Whitespace";
    case TokenKind::kComment: return "Comment";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> lex(std::string_view source) {
  std::vector<ParseDiagnostic> ignored;
  return lex(source, ignored);
}

std::vector<Token> lex(std::string_view s,
                       std::vector<ParseDiagnostic>& warnings) {
  std::vector<Token> tokens;
  size_t i = 0;
  auto emit = [&](TokenKind kind, size_t len) {
    tokens.push_back(Token{std::string(s.substr(i, len)), kind, {i, i + len}});
    i += len;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      emit(TokenKind::kWhitespace, j - i);
      continue;
    }
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      size_t j = s.find('\n', i);
      if (j == std::string_view::npos) j = s.size();
      emit(TokenKind::kComment, j - i);
      continue;
    }
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      size_t j = s.find("*/", i + 2);
      if (j == std::string_view::npos) {
        warnings.push_back({"unterminated block comment", {i, s.size()},
                            Severity::kWarning});
        j = s.size();
      } else {
        j += 2;
      }
      emit(TokenKind::kComment, j - i);
      continue;
    }
    if (c == '`') {
      // Compiler directives are carried as trivia through end of line.
      size_t j = s.find('\n', i);
      if (j == std::string_view::npos) j = s.size();
      emit(TokenKind::kComment, j - i);
      continue;
    }
    if (ident_start(c) || c == '$') {
      size_t j = i + 1;
      while (j < s.size() && ident_char(s[j])) ++j;
      const std::string_view word = s.substr(i, j - i);
      emit(is_keyword(word) ? TokenKind::kKeyword : TokenKind::kIdentifier,
           j - i);
      continue;
    }
    if (c == '\\') {
      size_t j = i + 1;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      emit(TokenKind::kIdentifier, j - i);
      continue;
    }
    if (digit(c)) {
      size_t j = i;
      while (j < s.size() && (digit(s[j]) || s[j] == '_')) ++j;
      j += based_tail(s, j);
      emit(TokenKind::kNumericLiteral, j - i);
      continue;
    }
    if (c == '\'') {
      if (const size_t n = based_tail(s, i); n > 0) {
        emit(TokenKind::kNumericLiteral, n);
        continue;
      }
    }
    if (c == '"') {
      size_t j = i + 1;
      while (j < s.size() && s[j] != '"' && s[j] != '\n') {
        if (s[j] == '\\') ++j;
        ++j;
      }
      if (j < s.size() && s[j] == '"') ++j;
      emit(TokenKind::kNumericLiteral, std::min(j, s.size()) - i);
      continue;
    }
    bool matched = false;
    for (std::string_view op : kOperators) {
      if (s.substr(i, op.size()) == op) {
        emit(TokenKind::kOperator, op.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kPunct.find(c) != std::string_view::npos) {
      emit(TokenKind::kPunctuation, 1);
      continue;
    }
    const size_t len =
        std::min(utf8_length(static_cast<unsigned char>(c)), s.size() - i);
    warnings.push_back(
        {"unknown character", {i, i + len}, Severity::kWarning});
    emit(TokenKind::kPunctuation, len);
  }
  return tokens;
}

bool classify_boundary(const std::vector<Token>& tokens) {
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    if (it->is_trivia()) continue;
    if (it->kind == TokenKind::kPunctuation) return it->text == ";";
    if (it->kind == TokenKind::kKeyword) {
      return it->text == "end" || it->text == "endcase" ||
             it->text == "endmodule";
    }
    return false;
  }
  return false;
}

}  // namespace forge::verilog
