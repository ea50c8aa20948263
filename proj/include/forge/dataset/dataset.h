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


#ifndef FORGE_DATASET_DATASET_H_
#define FORGE_DATASET_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/mutation/mutation.h"
#include "forge/positive/transforms.h"
#include "forge/validation/harness.h"

namespace forge::dataset {

enum class Category {
  kBooleanFunctions,
  kArithmetic,
  kDataPath,
  kCodecs,
  kStorage,
  kCounters,
  kMemory,
  kFsms,
};

std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);

struct CorpusEntry {
  Category category = Category::kBooleanFunctions;
  std::string module_name;
  std::filesystem::path anchor_path;
};

// The fifteen reference modules with their categories, in table order.
const std::vector<std::pair<std::string, Category>>& reference_modules();

// Entries for every reference module found as <name>.v under `dir`.
// Throws Error(kIo) naming the first missing module.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir);

inline constexpr int kSchemaVersion = 1;

struct TripletSample {
  std::string id;
  std::string module_name;
  std::string category;
  std::string anchor;
  std::string positive;
  std::string negative;
  positive::TransformRecord positive_meta;
  mutation::MutationRecord negative_meta;
  uint64_t stim_seed = 0;  // stimulus seed used for the negative's functional check
  validation::Verdict positive_verdict;
  validation::Verdict negative_verdict;

  bool operator==(const TripletSample& other) const;
};

struct BuildConfig {
  uint64_t seed = 0;
  size_t positives = 3;
  size_t negatives_per_family = 10;
  size_t max_triplets_per_anchor = 200;
  std::vector<mutation::Family> families = {
      mutation::Family::kPunctuation, mutation::Family::kKeyword, mutation::Family::kOperator,
      mutation::Family::kDeclaration, mutation::Family::kStructural};
  // When set, negatives come from this single rule instead of the families.
  std::optional<std::string> rule;
  int anchor_jobs = 1;
};

struct AnchorReport {
  std::string module_name;
  std::string category;
  size_t positives_generated = 0;
  size_t positives_retained = 0;
  std::map<std::string, size_t> negatives_generated;  // by family
  std::map<std::string, size_t> negatives_retained;   // by family
  size_t triplets = 0;
  std::optional<std::string> insufficient;  // reason the anchor produced nothing
};

struct BuildReport {
  std::vector<AnchorReport> anchors;
  std::vector<std::string> log;
  size_t total_triplets = 0;
  std::map<std::string, size_t> triplets_by_category;
  std::map<std::string, size_t> triplets_by_family;

  std::string summary() const;
};

struct BuildResult {
  std::vector<TripletSample> samples;
  BuildReport report;
};

// Validates candidates for every anchor and emits retained triplets in
// corpus order. Deterministic under cfg.seed for a fixed harness config.
BuildResult build(const std::vector<CorpusEntry>& corpus, const BuildConfig& cfg,
                  const validation::Harness& harness);

// Pairs retained negatives (interleaved across families) with retained
// positives round-robin. Negatives cycle in order and positive usage stays
// within one of each other at every prefix; no pair repeats. Returns
// (positive, negative) index pairs, at most `cap`.
std::vector<std::pair<size_t, size_t>> pair_indices(size_t positives, size_t negatives,
                                                    size_t cap);

// Orders negatives so that consecutive entries cycle through families.
std::vector<size_t> interleave_by_family(const std::vector<std::string>& families);

std::string to_json_line(const TripletSample& s);
// Throws Error(kSchema) on a malformed record.
TripletSample from_json_line(std::string_view line);

void write_jsonl(const std::filesystem::path& path, const std::vector<TripletSample>& samples);
// Throws Error(kSchema) naming the 1-based line number of a malformed line.
std::vector<TripletSample> read_jsonl(const std::filesystem::path& path);
std::vector<TripletSample> parse_jsonl(std::string_view text);

struct Revalidation {
  size_t checked = 0;
  std::vector<std::string> disagreements;  // sample ids whose verdict changed
};

// Re-runs validation on every `stride`-th sample and compares statuses.
Revalidation revalidate(const std::vector<TripletSample>& samples,
                        const validation::Harness& harness, size_t stride = 1);

}  // namespace forge::dataset

#endif  // FORGE_DATASET_DATASET_H_
