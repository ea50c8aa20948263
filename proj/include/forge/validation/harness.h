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


#ifndef FORGE_VALIDATION_HARNESS_H_
#define FORGE_VALIDATION_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/util/kv_config.h"
#include "forge/validation/simcheck.h"

namespace forge::validation {

enum class Status { kCompileFail, kFuncMismatch, kEquivalent, kIndeterminate };

std::string_view status_name(Status s);
Status parse_status(std::string_view name);

enum class Backend { kAuto, kExternal, kInternal };

std::string_view backend_name(Backend b);
Backend parse_backend(std::string_view name);

struct Verdict {
  Status status = Status::kIndeterminate;
  std::string tool_log;
  int runs = 0;
  bool compiled = false;  // set by check_compile when every run succeeded
  std::string backend;    // "external" or "internal"
};

// Command templates expand {design}, {anchor}, {tb}, {out} and {top}. The
// tools run inside a scratch directory holding the referenced files, so
// the placeholders expand to bare file names.
struct ToolConfig {
  std::string compile_cmd;
  std::string sim_cmd;
  std::string equiv_cmd;
  double timeout = 60.0;
  int repeat = 2;
  Backend backend = Backend::kAuto;
  int jobs = 1;
  StimulusPolicy stimulus;
  ProofLimits limits;

  // Defaults target yosys (or its yowasp build when that is what PATH has)
  // and Icarus Verilog.
  static ToolConfig defaults();
  // Overlays the keys of a tools.toml file onto defaults().
  static ToolConfig from_config(const KvConfig& cfg);
  static ToolConfig load(const std::filesystem::path& path);

  // Throws Error(kInvalidArgument) when a template lacks {design}.
  void validate() const;
};

// First word of a command template, i.e. the program it launches.
std::string command_program(const std::string& command);

// The module name the external templates see as {top}; the anchor is
// renamed to this for simulation and left alone for equivalence.
inline constexpr std::string_view kGoldTop = "forge_gold";
inline constexpr std::string_view kGateTop = "forge_gate";

// Replaces the name of the first module declared in `source`. Returns the
// source unchanged when no module header can be found.
std::string rename_top(std::string_view source, std::string_view new_name);

class Harness {
 public:
  explicit Harness(ToolConfig cfg);

  const ToolConfig& config() const { return cfg_; }

  // CompileFail only when every run fails; disagreeing runs and timeouts
  // are Indeterminate. A consistent pass is Indeterminate with
  // compiled=true, pending a functional or equivalence check.
  Verdict check_compile(const std::string& candidate) const;

  // FuncMismatch when the seeded stimulus exposes a differing output in
  // every run; sampled agreement is reported as Equivalent.
  Verdict check_functional(const std::string& candidate, const std::string& anchor,
                           uint64_t stim_seed) const;

  Verdict check_equivalent(const std::string& candidate, const std::string& anchor) const;

  // Compile then functional (negatives) or compile then equivalence
  // (positives); returns the first decisive verdict.
  Verdict classify_negative(const std::string& candidate, const std::string& anchor,
                            uint64_t stim_seed) const;
  Verdict classify_positive(const std::string& candidate, const std::string& anchor) const;

  bool external_compile() const { return uses_external(cfg_.compile_cmd); }
  bool external_sim() const { return uses_external(cfg_.sim_cmd); }
  bool external_equiv() const { return uses_external(cfg_.equiv_cmd); }

 private:
  bool uses_external(const std::string& command) const;
  Verdict internal_functional(const std::string& candidate, const std::string& anchor,
                              uint64_t stim_seed) const;
  Verdict internal_equivalent(const std::string& candidate, const std::string& anchor) const;

  ToolConfig cfg_;
};

enum class Role { kPositive, kNegative };

struct Job {
  std::string candidate;
  std::string anchor;
  Role role = Role::kNegative;
  uint64_t stim_seed = 0;
};

// Classifies every job, running up to config().jobs at once. Results are
// in job order.
std::vector<Verdict> classify_batch(const Harness& harness, const std::vector<Job>& jobs);

bool retain_negative(const Verdict& v);
bool retain_positive(const Verdict& v);

// One JSON object per line: {candidate, mode, status, runs, log_path}.
std::string verdict_json_line(const std::string& candidate, std::string_view mode,
                              const Verdict& v, const std::string& log_path);

}  // namespace forge::validation

#endif  // FORGE_VALIDATION_HARNESS_H_
