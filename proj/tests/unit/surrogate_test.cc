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


#include "forge/trace/surrogate.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "forge/features/feature_file.h"
#include "forge/util/error.h"
#include "forge/util/process.h"
#include "support/corpus.h"

namespace forge::trace {
namespace {

using forge::testing::corpus_names;
using forge::testing::corpus_source;

std::vector<std::string> corpus_texts() {
  std::vector<std::string> out;
  for (const auto& name : corpus_names()) out.push_back(corpus_source(name));
  return out;
}

std::vector<std::string> symbols(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& tok : verilog::lex(text)) {
    if (!tok.is_trivia()) out.push_back(BigramScorer::symbol(tok));
  }
  return out;
}

TEST(BigramScorerTest, DistributionsSumToOne) {
  const BigramScorer m = BigramScorer::fit(corpus_texts());
  std::vector<std::string> vocab = {"<s>", "<unk>", "never-seen"};
  for (const auto& s : symbols(corpus_source("counter"))) vocab.push_back(s);
  for (const auto& s : symbols(corpus_source("ram"))) vocab.push_back(s);
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  // Every symbol of the model's vocabulary is reachable through the corpus;
  // summing over all of them must give one for any context.
  std::set<std::string> all = {"<s>", "<unk>"};
  for (const auto& text : corpus_texts()) {
    for (const auto& s : symbols(text)) all.insert(s);
  }
  ASSERT_EQ(all.size(), m.vocab_size());
  for (const auto& prev : vocab) {
    double total = 0.0;
    for (const auto& next : all) total += m.prob(prev, next);
    EXPECT_NEAR(total, 1.0, 1e-12) << prev;
  }
}

TEST(BigramScorerTest, RecordsMatchTheModel) {
  const BigramScorer m = BigramScorer::fit(corpus_texts());
  const std::string text = corpus_source("half_adder");
  const TokenTrace t = m.score(text, "half_adder");
  const auto syms = symbols(text);
  ASSERT_EQ(t.records.size(), syms.size());
  std::string prev = "<s>";
  std::set<std::string> all = {"<s>", "<unk>"};
  for (const auto& s : corpus_texts()) {
    for (const auto& y : symbols(s)) all.insert(y);
  }
  for (size_t i = 0; i < syms.size(); ++i) {
    EXPECT_NEAR(t.records[i].nll, -std::log(m.prob(prev, syms[i])), 1e-12);
    double h = 0.0;
    for (const auto& next : all) h -= m.prob(prev, next) * std::log(m.prob(prev, next));
    EXPECT_NEAR(t.records[i].entropy, h, 1e-9);
    EXPECT_EQ(t.records[i].hidden_ref, std::optional<uint32_t>(i));
    prev = syms[i];
  }
  std::string trimmed = text;
  trimmed.erase(trimmed.find_last_not_of(" \t\r\n") + 1);
  EXPECT_EQ(final_text(t), trimmed);
  EXPECT_TRUE(t.records.back().is_boundary);  // endmodule
  EXPECT_EQ(t.hidden.rows(), t.records.size());
}

TEST(BigramScorerTest, MutationRaisesSurprise) {
  const BigramScorer m = BigramScorer::fit(corpus_texts());
  const std::string text = corpus_source("half_adder");
  std::string broken = text;
  broken.erase(broken.find(';'), 1);
  const auto max_nll = [](const TokenTrace& t) {
    double v = 0.0;
    for (const auto& r : t.records) v = std::max(v, r.nll);
    return v;
  };
  EXPECT_GT(max_nll(m.score(broken, "b")), max_nll(m.score(text, "a")));
}

TEST(BigramScorerTest, TracesRoundTripAndExtract) {
  const BigramScorer m = BigramScorer::fit(corpus_texts(), {0.1, 12, 4});
  TokenTrace t = m.score(corpus_source("mux"), "mux");
  t.header.hidden_file = "mux.bin";
  t.header.label = 1;
  ScratchDir dir;
  write_trace(dir.path() / "mux.jsonl", t);
  EXPECT_EQ(read_trace(dir.path() / "mux.jsonl"), t);
  const auto row = features::extract(t, "mux.bin");
  EXPECT_EQ(row.v_sem.size(), 12u);
  EXPECT_EQ(row.combined().size(), 26u);
  EXPECT_EQ(row.label, std::optional<int>(1));
}

TEST(BigramScorerTest, Errors) {
  EXPECT_THROW(BigramScorer::fit({}), Error);
  EXPECT_THROW(BigramScorer::fit({"module m; endmodule"}, {0.0, 8, 0}), Error);
  const BigramScorer m = BigramScorer::fit({"module m; endmodule"});
  EXPECT_THROW(m.score("  // only a comment\n", "x"), Error);
}

}  // namespace
}  // namespace forge::trace
