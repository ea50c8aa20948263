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


#ifndef FORGE_TRACE_SURROGATE_H_
#define FORGE_TRACE_SURROGATE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "forge/trace/trace.h"
#include "forge/verilog/lexer.h"

namespace forge::trace {

// A smoothed bigram model over Verilog lexemes that scores existing text
// the way a language model would when teacher-forced: per-token NLL and
// entropy in nats plus a hidden-state row per token. It stands in for a
// real model when building classifier features offline.
//
// Identifiers and numbers are folded to <id> and <num> so the statistics
// carry across modules; every other lexeme is its own symbol.
class BigramScorer {
 public:
  struct Options {
    double smoothing = 0.1;  // add-k
    size_t hidden_dim = 16;
    uint64_t seed = 0;       // embedding table
  };

  static BigramScorer fit(const std::vector<std::string>& texts, const Options& opt);
  static BigramScorer fit(const std::vector<std::string>& texts) { return fit(texts, Options{}); }

  // Symbol of a lexeme; trivia has none.
  static std::string symbol(const verilog::Token& tok);

  // One record per non-trivia lexeme, its leading trivia included in the
  // token text, so final_text() reproduces `text` up to trailing trivia.
  TokenTrace score(std::string_view text, const std::string& trace_id) const;

  size_t vocab_size() const { return vocab_.size(); }
  const Options& options() const { return opt_; }

  // Probability of `next` after `prev`, both symbols.
  double prob(const std::string& prev, const std::string& next) const;

 private:
  size_t index(const std::string& sym) const;
  std::vector<double> embedding(size_t sym) const;

  Options opt_;
  std::map<std::string, size_t> vocab_;  // includes <s> and <unk>
  std::vector<std::map<size_t, double>> counts_;
  std::vector<double> totals_;
};

}  // namespace forge::trace

#endif  // FORGE_TRACE_SURROGATE_H_
