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


#include "forge/features/features.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "forge/embedding/embedding.h"
#include "forge/util/error.h"
#include "forge/verilog/lexer.h"

namespace forge::features {
namespace {

struct Moments {
  double mean = 0;
  double std = 0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(ss / static_cast<double>(xs.size()));
  return m;
}

double mean_of(const std::vector<double>& xs) { return moments(xs).mean; }

}  // namespace

std::string_view token_class_name(TokenClass c) {
  switch (c) {
    case TokenClass::kPunctuation: return "Punctuation";
    case TokenClass::kKeyword: return "Keyword";
    case TokenClass::kOther: return "Other";
  }
  return "Other";
}

TokenClass parse_token_class(std::string_view name) {
  for (TokenClass c : {TokenClass::kPunctuation, TokenClass::kKeyword, TokenClass::kOther}) {
    if (token_class_name(c) == name) return c;
  }
  throw Error(ErrorCode::kSchema, "unknown token class '" + std::string(name) + "'");
}

TokenClass classify_token_text(std::string_view text) {
  bool any = false;
  bool all_punct = true;
  bool all_keyword = true;
  for (const verilog::Token& t : verilog::lex(text)) {
    if (t.is_trivia()) continue;
    any = true;
    all_punct = all_punct && t.kind == verilog::TokenKind::kPunctuation;
    all_keyword = all_keyword && t.kind == verilog::TokenKind::kKeyword;
  }
  if (!any) return TokenClass::kOther;
  if (all_punct) return TokenClass::kPunctuation;
  if (all_keyword) return TokenClass::kKeyword;
  return TokenClass::kOther;
}

TokenStep make_step(std::string text, double nll, double entropy) {
  TokenStep s;
  s.token_class = classify_token_text(text);
  s.text = std::move(text);
  s.nll = nll;
  s.entropy = entropy;
  return s;
}

const std::array<std::string_view, kNumStatFeatures>& stat_feature_names() {
  static const std::array<std::string_view, kNumStatFeatures> kNames = {
      "avg_nll",
      "avg_entropy",
      "max_nll",
      "max_entropy",
      "std_nll",
      "low_confidence_token_count",
      "spike_num",
      "mean_spike_value",
      "std_spike_value",
      "max_spike_value",
      "max_spike_token_uncertainty",
      "punct_mean_nll",
      "keyword_mean_nll",
      "last_k_mean_nll",
  };
  return kNames;
}

std::array<double, kNumStatFeatures> StatFeatures::values() const {
  return {avg_nll,
          avg_entropy,
          max_nll,
          max_entropy,
          std_nll,
          low_confidence_token_count,
          spike_num,
          mean_spike_value,
          std_spike_value,
          max_spike_value,
          max_spike_token_uncertainty,
          punct_mean_nll,
          keyword_mean_nll,
          last_k_mean_nll};
}

StatFeatures compute_stats(const std::vector<TokenStep>& steps, const StatParams& params) {
  if (steps.empty()) throw Error(ErrorCode::kEmptyInput, "empty trace");
  if (params.last_k == 0 || !(params.low_confidence_prob > 0) || params.low_confidence_prob > 1 ||
      !(params.spike_sigmas >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "bad feature parameters");
  }
  std::vector<double> nll;
  std::vector<double> entropy;
  std::vector<double> punct;
  std::vector<double> keyword;
  nll.reserve(steps.size());
  entropy.reserve(steps.size());
  for (size_t i = 0; i < steps.size(); ++i) {
    const TokenStep& s = steps[i];
    if (!std::isfinite(s.nll) || s.nll < 0 || !std::isfinite(s.entropy) || s.entropy < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "step " + std::to_string(i) + ": nll and entropy must be finite and >= 0");
    }
    nll.push_back(s.nll);
    entropy.push_back(s.entropy);
    if (s.token_class == TokenClass::kPunctuation) punct.push_back(s.nll);
    if (s.token_class == TokenClass::kKeyword) keyword.push_back(s.nll);
  }

  StatFeatures f;
  const Moments m = moments(nll);
  f.avg_nll = m.mean;
  f.std_nll = m.std;
  f.avg_entropy = mean_of(entropy);
  f.max_nll = *std::max_element(nll.begin(), nll.end());
  f.max_entropy = *std::max_element(entropy.begin(), entropy.end());

  const double low_conf = -std::log(params.low_confidence_prob);
  // A constant sequence can leave the computed mean a few ulps below its
  // elements; the slack keeps such steps from counting as spikes.
  const double slack = 8 * std::numeric_limits<double>::epsilon() * f.max_nll;
  const double threshold = m.mean + params.spike_sigmas * m.std + slack;
  std::vector<double> spikes;
  size_t argmax = steps.size();
  for (size_t i = 0; i < steps.size(); ++i) {
    if (nll[i] > low_conf) f.low_confidence_token_count += 1;
    if (nll[i] > threshold) {
      spikes.push_back(nll[i]);
      if (argmax == steps.size() || nll[i] > nll[argmax]) argmax = i;
    }
  }
  f.spike_num = static_cast<double>(spikes.size());
  if (!spikes.empty()) {
    const Moments sm = moments(spikes);
    f.mean_spike_value = sm.mean;
    f.std_spike_value = sm.std;
    f.max_spike_value = nll[argmax];
    f.max_spike_token_uncertainty = entropy[argmax];
  }

  f.punct_absent = punct.empty();
  f.keyword_absent = keyword.empty();
  f.punct_mean_nll = mean_of(punct);
  f.keyword_mean_nll = mean_of(keyword);

  const size_t k = std::min(params.last_k, nll.size());
  f.last_k_mean_nll = mean_of(std::vector<double>(nll.end() - static_cast<long>(k), nll.end()));
  return f;
}

NormalizationProfile NormalizationProfile::identity() {
  NormalizationProfile p;
  p.mean.fill(0.0);
  p.scale.fill(1.0);
  return p;
}

NormalizationProfile NormalizationProfile::fit(
    const std::vector<std::array<double, kNumStatFeatures>>& rows) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no rows to fit a normalization profile");
  NormalizationProfile p;
  for (size_t j = 0; j < kNumStatFeatures; ++j) {
    std::vector<double> col;
    col.reserve(rows.size());
    for (const auto& r : rows) col.push_back(r[j]);
    const Moments m = moments(col);
    p.mean[j] = m.mean;
    p.scale[j] = m.std > 0 ? m.std : 1.0;
  }
  return p;
}

std::array<double, kNumStatFeatures> NormalizationProfile::apply(
    const std::array<double, kNumStatFeatures>& v) const {
  std::array<double, kNumStatFeatures> out;
  for (size_t j = 0; j < kNumStatFeatures; ++j) out[j] = (v[j] - mean[j]) / scale[j];
  return out;
}

std::array<double, kNumStatFeatures> NormalizationProfile::invert(
    const std::array<double, kNumStatFeatures>& v) const {
  std::array<double, kNumStatFeatures> out;
  for (size_t j = 0; j < kNumStatFeatures; ++j) out[j] = v[j] * scale[j] + mean[j];
  return out;
}

Vector concat(const Vector& v_sem, const std::array<double, kNumStatFeatures>& v_stat) {
  Vector out = v_sem;
  out.insert(out.end(), v_stat.begin(), v_stat.end());
  return out;
}

HybridFeature compute_hybrid(const math::Matrix& h, const std::vector<TokenStep>& steps,
                             const StatParams& params, const NormalizationProfile* profile) {
  HybridFeature f;
  f.v_sem = embedding::max_pool(h);
  f.v_stat = compute_stats(steps, params);
  const auto raw = f.v_stat.values();
  f.combined = concat(f.v_sem, profile ? profile->apply(raw) : raw);
  return f;
}

}  // namespace forge::features
