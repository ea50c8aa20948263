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


#ifndef FORGE_FEATURES_FEATURE_FILE_H_
#define FORGE_FEATURES_FEATURE_FILE_H_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "forge/features/features.h"
#include "forge/trace/trace.h"

namespace forge::features {

// One line of features.jsonl.
struct FeatureRow {
  std::string trace_id;
  std::array<double, kNumStatFeatures> v_stat{};
  Vector v_sem;
  std::string v_sem_ref;  // sidecar the embedding was pooled from
  std::optional<int> label;
  bool punct_absent = false;
  bool keyword_absent = false;

  Vector combined() const { return concat(v_sem, v_stat); }
  bool operator==(const FeatureRow&) const = default;
};

// Features of a trace's final path: stats over its steps, max-pooled
// hidden states over the prompt rows plus the path rows.
FeatureRow extract(const trace::TokenTrace& trace, const std::string& v_sem_ref,
                   const StatParams& params = {});

std::string feature_json_line(const FeatureRow& row);
void write_features(const std::filesystem::path& path, const std::vector<FeatureRow>& rows);
// Throws Error(kSchema) with the offending line number.
std::vector<FeatureRow> read_features(const std::filesystem::path& path);
std::vector<FeatureRow> parse_features(const std::string& text);

}  // namespace forge::features

#endif  // FORGE_FEATURES_FEATURE_FILE_H_
