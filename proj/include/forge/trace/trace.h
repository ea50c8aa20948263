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


#ifndef FORGE_TRACE_TRACE_H_
#define FORGE_TRACE_TRACE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "forge/features/features.h"
#include "forge/math/matrix.h"

namespace forge::trace {

inline constexpr int kTraceSchemaVersion = 1;
inline constexpr char kTraceSchema[] = "forge-trace";
inline constexpr char kPoolingConvention[] = "max over full sequence, boundary token appended";

// Hidden-state sidecar: "VCLH", u32 L, u32 D, then L*D float32 values,
// little-endian and row-major. Values are stored as float32, so doubles
// that are not exactly representable are rounded.
void write_hidden(const std::filesystem::path& path, const math::Matrix& h);
math::Matrix read_hidden(const std::filesystem::path& path);

struct TraceHeader {
  std::string trace_id;
  std::string prompt;
  std::string source;
  uint64_t seed = 0;
  std::string entropy_unit = "nats";
  std::string pooling = kPoolingConvention;
  std::string hidden_file;  // relative to the trace file; empty when absent
  uint32_t prompt_rows = 0;  // leading sidecar rows that belong to the prompt
  uint32_t hidden_dim = 0;
  bool complete = true;  // false when the token budget ran out
  std::optional<int> label;  // 1 = valid, 0 = erroneous

  bool operator==(const TraceHeader&) const = default;
};

struct TraceRecord {
  uint64_t step = 0;
  std::string token_text;
  int64_t token_id = -1;
  double nll = 0.0;
  double entropy = 0.0;
  features::TokenClass token_class = features::TokenClass::kOther;
  bool is_boundary = false;
  int attempt = 1;
  std::optional<uint32_t> hidden_ref;  // sidecar row

  bool operator==(const TraceRecord&) const = default;
};

struct TokenTrace {
  TraceHeader header;
  std::vector<TraceRecord> records;
  math::Matrix hidden;  // prompt rows, then one row per referenced record

  bool operator==(const TokenTrace&) const = default;
};

// Writes the JSONL trace (header line first) and, when `hidden` is
// non-empty, the sidecar named by header.hidden_file next to it.
void write_trace(const std::filesystem::path& path, const TokenTrace& trace);

// Throws Error(kSchema) on malformed or unsupported content and
// Error(kIo) naming the sidecar when it is referenced but missing.
TokenTrace read_trace(const std::filesystem::path& path, bool load_hidden = true);
TokenTrace parse_trace(const std::string& text);

// Indices of the records that survive in the output: an attempt-1
// segment followed by an attempt-2 segment was rejected and is dropped.
std::vector<size_t> final_path(const TokenTrace& trace);

std::vector<features::TokenStep> steps_of(const TokenTrace& trace,
                                          const std::vector<size_t>& indices);

// Prompt rows followed by the rows of `indices`. Throws Error(kSchema) if
// a record has no hidden row.
math::Matrix hidden_of(const TokenTrace& trace, const std::vector<size_t>& indices);

// Concatenated token text of the final path.
std::string final_text(const TokenTrace& trace);

}  // namespace forge::trace

#endif  // FORGE_TRACE_TRACE_H_
