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


#ifndef FORGE_POSITIVE_TRANSFORMS_H_
#define FORGE_POSITIVE_TRANSFORMS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/verilog/ast.h"

namespace forge::positive {

enum class TransformId { kRename, kDeMorgan, kCommutativeSwap, kTernaryRewrite, kDeclReorder };

std::string_view transform_name(TransformId id);
std::optional<TransformId> parse_transform(std::string_view name);
const std::vector<TransformId>& all_transforms();

struct TransformRecord {
  TransformId transform_id = TransformId::kRename;
  std::string details;
  uint64_t seed = 0;
  std::map<std::string, std::string> renaming;  // Rename only: old -> new
};

struct Positive {
  std::string source;
  TransformRecord record;
};

// Applies one semantics-preserving rewrite chosen by `seed` among the
// applicable sites. Throws Error(kTransformInapplicable) when there is no
// site and Error(kAnchorInvalid) for an anchor with parse errors.
Positive transform(const verilog::SourceUnit& anchor, TransformId id, uint64_t seed);

// Up to `count` distinct positives, cycling through the transforms in a
// seed-dependent order.
std::vector<Positive> generate_positives(const verilog::SourceUnit& anchor, size_t count,
                                         uint64_t seed,
                                         const std::vector<TransformId>& allowed = all_transforms());

// Renames identifiers throughout a module (declarations and references).
void rename_module(verilog::Module& m, const std::map<std::string, std::string>& renaming);

// Structural equality after renaming non-port identifiers canonically in
// declaration order.
bool alpha_equivalent(const verilog::SourceUnit& a, const verilog::SourceUnit& b);

// Re-prints the source with every non-port symbol renamed by declaration
// order, so designs that differ only in internal names print alike.
std::string canonical_names_source(const verilog::SourceUnit& u);

}  // namespace forge::positive

#endif  // FORGE_POSITIVE_TRANSFORMS_H_
