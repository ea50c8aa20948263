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


#ifndef FORGE_FEATURES_FEATURES_H_
#define FORGE_FEATURES_FEATURES_H_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "forge/math/matrix.h"

namespace forge::features {

using Vector = std::vector<double>;

enum class TokenClass { kPunctuation, kKeyword, kOther };

std::string_view token_class_name(TokenClass c);
// Throws Error(kSchema) for an unknown name.
TokenClass parse_token_class(std::string_view name);

// Lexes a decoded token's text. Punctuation or Keyword when every
// non-trivia lexeme has that kind, Other otherwise (including pure
// whitespace and mixed text such as ");end").
TokenClass classify_token_text(std::string_view text);

struct TokenStep {
  std::string text;
  TokenClass token_class = TokenClass::kOther;
  double nll = 0.0;      // -log p(chosen token)
  double entropy = 0.0;  // nats, over the full next-token distribution
};

// TokenStep with the class filled in from the text.
TokenStep make_step(std::string text, double nll, double entropy);

struct StatParams {
  double spike_sigmas = 2.0;          // spike: nll > mean + spike_sigmas * std
  double low_confidence_prob = 0.1;   // low confidence: p(token) < this
  size_t last_k = 10;
};

inline constexpr size_t kNumStatFeatures = 14;
inline constexpr int kFeatureSchemaVersion = 1;

// Frozen order; changing it requires bumping kFeatureSchemaVersion.
const std::array<std::string_view, kNumStatFeatures>& stat_feature_names();

struct StatFeatures {
  double avg_nll = 0;
  double avg_entropy = 0;
  double max_nll = 0;
  double max_entropy = 0;
  double std_nll = 0;
  double low_confidence_token_count = 0;
  double spike_num = 0;
  double mean_spike_value = 0;
  double std_spike_value = 0;
  double max_spike_value = 0;
  double max_spike_token_uncertainty = 0;
  double punct_mean_nll = 0;
  double keyword_mean_nll = 0;
  double last_k_mean_nll = 0;

  // Set when no step of that class occurred (the mean is then 0).
  bool punct_absent = false;
  bool keyword_absent = false;

  std::array<double, kNumStatFeatures> values() const;
};

// Population statistics over every step. Throws Error(kEmptyInput) for an
// empty trace and Error(kInvalidArgument) for negative or non-finite
// nll/entropy.
StatFeatures compute_stats(const std::vector<TokenStep>& steps, const StatParams& params = {});

// Per-feature standardization of v_stat, fitted on a training split.
struct NormalizationProfile {
  std::array<double, kNumStatFeatures> mean{};
  std::array<double, kNumStatFeatures> scale{};  // population std, 1 where it is 0

  static NormalizationProfile identity();
  // Throws Error(kEmptyInput) for no rows.
  static NormalizationProfile fit(const std::vector<std::array<double, kNumStatFeatures>>& rows);

  std::array<double, kNumStatFeatures> apply(const std::array<double, kNumStatFeatures>& v) const;
  std::array<double, kNumStatFeatures> invert(const std::array<double, kNumStatFeatures>& v) const;

  bool operator==(const NormalizationProfile&) const = default;
};

struct HybridFeature {
  Vector v_sem;
  StatFeatures v_stat;
  Vector combined;  // [v_sem; v_stat], D + 14
};

// v_sem = max_pool(h). When `profile` is given, the v_stat part of
// `combined` is standardized with it; v_stat itself stays raw.
HybridFeature compute_hybrid(const math::Matrix& h, const std::vector<TokenStep>& steps,
                             const StatParams& params = {},
                             const NormalizationProfile* profile = nullptr);

Vector concat(const Vector& v_sem, const std::array<double, kNumStatFeatures>& v_stat);

}  // namespace forge::features

#endif  // FORGE_FEATURES_FEATURES_H_
