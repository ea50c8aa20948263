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


#ifndef FORGE_MUTATION_MUTATION_H_
#define FORGE_MUTATION_MUTATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/verilog/ast.h"

namespace forge::mutation {

enum class Family { kPunctuation, kKeyword, kOperator, kDeclaration, kStructural };

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);

struct MutationRule {
  std::string id;
  Family family = Family::kPunctuation;
  std::string description;
};

// One candidate edit: replace anchor[span] with `replacement`.
struct Site {
  verilog::Span span;
  std::string replacement;
};

struct MutationRecord {
  std::string rule_id;
  verilog::Span site;
  std::string original_text;
  std::string mutated_text;
  uint64_t seed = 0;
};

struct Mutant {
  std::string source;
  MutationRecord record;
};

// The 17 rules, grouped by family in a fixed order.
const std::vector<MutationRule>& list_rules();

// Throws Error(kInvalidArgument) for an unknown id.
const MutationRule& find_rule(std::string_view id);

std::vector<const MutationRule*> rules_in_family(Family f);

// True for rules whose mutants the internal parser and declaration check
// must reject. The rest need a compiler or simulator to classify.
bool statically_invalid(std::string_view rule_id);

// Every applicable site in source order. Throws Error(kAnchorInvalid) when
// the anchor has Error diagnostics.
std::vector<Site> enumerate_sites(const verilog::SourceUnit& anchor, const MutationRule& rule);

// Up to `max_variants` distinct mutants; sites are sampled without
// replacement when there are more than `max_variants`.
std::vector<Mutant> mutate(const verilog::SourceUnit& anchor, const MutationRule& rule,
                           uint64_t seed, size_t max_variants = 10);

// Same, drawing from the pooled sites of every rule in the family.
std::vector<Mutant> mutate_family(const verilog::SourceUnit& anchor, Family family,
                                  uint64_t seed, size_t max_variants = 10);

// Replays a record against the anchor text.
std::string apply_record(std::string_view anchor, const MutationRecord& record);

// Byte range in which `a` and `b` differ after stripping their common
// prefix and suffix, as spans into each string.
struct DiffHunk {
  verilog::Span in_a;
  verilog::Span in_b;
};
std::optional<DiffHunk> diff_hunk(std::string_view a, std::string_view b);

}  // namespace forge::mutation

#endif  // FORGE_MUTATION_MUTATION_H_
