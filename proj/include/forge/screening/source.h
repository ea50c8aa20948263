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


#ifndef FORGE_SCREENING_SOURCE_H_
#define FORGE_SCREENING_SOURCE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "forge/math/matrix.h"
#include "forge/trace/trace.h"

namespace forge::screening {

struct SamplingParams {
  double temperature = 0.7;
  double top_p = 0.95;
  uint64_t seed = 0;
};

struct SourceStep {
  std::string text;
  int64_t token_id = -1;
  double nll = 0.0;
  double entropy = 0.0;  // nats
  bool eos = false;      // end of sequence; the other fields are unused
};

using Checkpoint = std::string;

// A decoding backend the screening loop can rewind. restore() rewinds to
// a snapshot; tokens after it are drawn with `attempt_seed`, so a
// deterministic source reproduces its continuation for a repeated seed.
class TokenSource {
 public:
  virtual ~TokenSource() = default;

  virtual void begin(const std::string& prompt, const SamplingParams& params) = 0;
  virtual SourceStep next() = 0;
  virtual Checkpoint snapshot() = 0;
  virtual void restore(const Checkpoint& checkpoint, uint64_t attempt_seed) = 0;
  // Prompt rows followed by one row per token on the current path.
  virtual math::Matrix hidden_states() = 0;
  virtual std::string describe() const = 0;
};

// Parameters of the scripted source, written "key=value,..." with keys
// statements, bad, dim.
struct ScriptSpec {
  size_t statements = 20;
  double bad_probability = 0.3;
  size_t hidden_dim = 8;

  // Throws Error(kInvalidArgument).
  static ScriptSpec parse(std::string_view text);
  std::string to_string() const;
};

// Emits `statements` continuous assignments and then "endmodule". Each
// statement is independently bad (its right operand dropped) with the
// configured probability, drawn from the statement index and the current
// attempt seed. Hidden rows are float32-representable functions of token
// text and position.
class ScriptedSource : public TokenSource {
 public:
  explicit ScriptedSource(ScriptSpec spec) : spec_(spec) {}

  void begin(const std::string& prompt, const SamplingParams& params) override;
  SourceStep next() override;
  Checkpoint snapshot() override;
  void restore(const Checkpoint& checkpoint, uint64_t attempt_seed) override;
  math::Matrix hidden_states() override;
  std::string describe() const override { return "script:" + spec_.to_string(); }

  // True for the text of a bad statement.
  static bool is_bad_segment(std::string_view text);

 private:
  struct State {
    size_t statement = 0;
    size_t token = 0;
    uint64_t seed = 0;
    size_t path_len = 0;
    std::string prev;  // previous token text
  };
  struct Statement {
    std::vector<std::string> tokens;
    bool bad = false;
  };
  Statement statement(size_t index, uint64_t seed) const;
  std::vector<double> row_for(std::string_view prev, std::string_view text) const;

  ScriptSpec spec_;
  State state_;
  Statement current_;
  bool have_current_ = false;
  std::vector<std::vector<double>> rows_;  // prompt rows then path rows
  size_t prompt_rows_ = 0;
  std::map<Checkpoint, State> checkpoints_;
};

// Serves a recorded trace. Resampling a segment serves its recorded
// attempt-2 alternate when the trace has one and the same tokens again
// otherwise. Requires the hidden-state sidecar to be loaded.
class ReplaySource : public TokenSource {
 public:
  explicit ReplaySource(trace::TokenTrace trace);

  void begin(const std::string& prompt, const SamplingParams& params) override;
  SourceStep next() override;
  Checkpoint snapshot() override;
  void restore(const Checkpoint& checkpoint, uint64_t attempt_seed) override;
  math::Matrix hidden_states() override;
  std::string describe() const override { return "replay:" + trace_.header.trace_id; }

  const trace::TraceHeader& header() const { return trace_.header; }

 private:
  struct Slot {
    std::vector<size_t> primary;    // record indices, attempt 1
    std::vector<size_t> alternate;  // attempt 2, may be empty
  };
  struct Position {
    size_t slot = 0;
    int attempt = 1;
    size_t index = 0;
  };
  const std::vector<size_t>& tokens_of(const Position& p) const;

  trace::TokenTrace trace_;
  std::vector<Slot> slots_;
  Position pos_;
  std::vector<size_t> path_;  // served record indices on the current path
  std::map<Checkpoint, std::pair<Position, size_t>> checkpoints_;
};

}  // namespace forge::screening

#endif  // FORGE_SCREENING_SOURCE_H_
