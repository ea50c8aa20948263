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

#include <cmath>

#include "forge/util/error.h"
#include "forge/util/rng.h"

namespace forge::trace {

namespace {

constexpr char kStart[] = "<s>";
constexpr char kUnknown[] = "<unk>";

}  // namespace

std::string BigramScorer::symbol(const verilog::Token& tok) {
  switch (tok.kind) {
    case verilog::TokenKind::kIdentifier:
      return "<id>";
    case verilog::TokenKind::kNumericLiteral:
      return "<num>";
    default:
      return tok.text;
  }
}

BigramScorer BigramScorer::fit(const std::vector<std::string>& texts, const Options& opt) {
  if (!(opt.smoothing > 0.0) || !std::isfinite(opt.smoothing)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing must be positive");
  }
  if (opt.hidden_dim < 2) throw Error(ErrorCode::kInvalidArgument, "hidden_dim must be >= 2");
  if (texts.empty()) throw Error(ErrorCode::kEmptyInput, "no training texts");
  BigramScorer m;
  m.opt_ = opt;
  m.vocab_[kStart] = 0;
  m.vocab_[kUnknown] = 1;
  std::vector<std::vector<size_t>> seqs;
  for (const std::string& text : texts) {
    std::vector<size_t> seq;
    for (const auto& tok : verilog::lex(text)) {
      if (tok.is_trivia()) continue;
      const auto [it, inserted] = m.vocab_.emplace(symbol(tok), m.vocab_.size());
      seq.push_back(it->second);
    }
    seqs.push_back(std::move(seq));
  }
  m.counts_.resize(m.vocab_.size());
  m.totals_.assign(m.vocab_.size(), 0.0);
  for (const auto& seq : seqs) {
    size_t prev = 0;
    for (size_t s : seq) {
      m.counts_[prev][s] += 1.0;
      m.totals_[prev] += 1.0;
      prev = s;
    }
  }
  return m;
}

size_t BigramScorer::index(const std::string& sym) const {
  const auto it = vocab_.find(sym);
  return it == vocab_.end() ? 1 : it->second;
}

double BigramScorer::prob(const std::string& prev, const std::string& next) const {
  const size_t p = index(prev), n = index(next);
  const auto it = counts_[p].find(n);
  const double c = it == counts_[p].end() ? 0.0 : it->second;
  const double v = static_cast<double>(vocab_.size());
  return (c + opt_.smoothing) / (totals_[p] + opt_.smoothing * v);
}

std::vector<double> BigramScorer::embedding(size_t sym) const {
  Rng rng(derive_seed(opt_.seed, sym));
  std::vector<double> e(opt_.hidden_dim);
  for (double& x : e) x = rng.normal();
  return e;
}

TokenTrace BigramScorer::score(std::string_view text, const std::string& trace_id) const {
  TokenTrace t;
  t.header.trace_id = trace_id;
  t.header.source = "surrogate:bigram";
  t.header.seed = opt_.seed;
  t.header.hidden_dim = static_cast<uint32_t>(opt_.hidden_dim);
  const double v = static_cast<double>(vocab_.size());
  std::vector<std::vector<double>> rows;
  std::string pending;  // trivia waiting for the next lexeme
  size_t prev = 0;
  for (const auto& tok : verilog::lex(text)) {
    if (tok.is_trivia()) {
      pending += tok.text;
      continue;
    }
    const size_t cur = index(symbol(tok));
    const double denom = totals_[prev] + opt_.smoothing * v;
    double entropy = 0.0;
    size_t seen = 0;
    for (const auto& [s, c] : counts_[prev]) {
      const double p = (c + opt_.smoothing) / denom;
      entropy -= p * std::log(p);
      ++seen;
    }
    const double p0 = opt_.smoothing / denom;
    entropy -= static_cast<double>(vocab_.size() - seen) * p0 * std::log(p0);
    const auto it = counts_[prev].find(cur);
    const double c = it == counts_[prev].end() ? 0.0 : it->second;

    TraceRecord r;
    r.step = t.records.size();
    r.token_text = pending + tok.text;
    r.token_id = static_cast<int64_t>(cur);
    r.nll = -std::log((c + opt_.smoothing) / denom);
    r.entropy = entropy;
    r.token_class = features::classify_token_text(tok.text);
    r.is_boundary = verilog::classify_boundary({tok});
    r.hidden_ref = static_cast<uint32_t>(rows.size());
    pending.clear();

    std::vector<double> row = embedding(cur);
    const std::vector<double> back = embedding(prev);
    for (size_t j = 0; j < row.size(); ++j) {
      row[j] = static_cast<float>(row[j] + 0.5 * back[j]);
    }
    row[0] = static_cast<float>(r.nll / 10.0);
    rows.push_back(std::move(row));
    t.records.push_back(std::move(r));
    prev = cur;
  }
  if (t.records.empty()) throw Error(ErrorCode::kEmptyInput, trace_id + ": no tokens to score");
  t.hidden = math::Matrix(rows.size(), opt_.hidden_dim);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < opt_.hidden_dim; ++j) t.hidden(i, j) = rows[i][j];
  }
  return t;
}

}  // namespace forge::trace
