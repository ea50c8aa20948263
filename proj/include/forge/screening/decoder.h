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


#ifndef FORGE_SCREENING_DECODER_H_
#define FORGE_SCREENING_DECODER_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/classifier/classifier.h"
#include "forge/features/features.h"
#include "forge/screening/source.h"
#include "forge/trace/trace.h"

namespace forge::screening {

struct GateInput {
  const features::Vector& hybrid;  // raw [v_sem; v_stat]
  std::string_view segment;        // text since the last accepted boundary
  std::string_view text;           // all decoded text on the current path
};

// Scores a candidate continuation at a statement boundary; higher means
// more likely valid.
class Gate {
 public:
  virtual ~Gate() = default;
  virtual double score(const GateInput& in) = 0;
  // Required hybrid width, or 0 when any width is accepted.
  virtual size_t input_dim() const { return 0; }
};

class ModelGate : public Gate {
 public:
  explicit ModelGate(classifier::ClassifierModel model) : model_(std::move(model)) {}
  double score(const GateInput& in) override { return classifier::forward(model_, in.hybrid); }
  size_t input_dim() const override { return model_.input_dim(); }

 private:
  classifier::ClassifierModel model_;
};

class ConstantGate : public Gate {
 public:
  explicit ConstantGate(double value) : value_(value) {}
  double score(const GateInput&) override { return value_; }

 private:
  double value_;
};

// 0 for segments the predicate calls bad, 1 otherwise.
class OracleGate : public Gate {
 public:
  explicit OracleGate(std::function<bool(std::string_view)> is_bad) : is_bad_(std::move(is_bad)) {}
  double score(const GateInput& in) override { return is_bad_(in.segment) ? 0.0 : 1.0; }

 private:
  std::function<bool(std::string_view)> is_bad_;
};

enum class StatScope { kSegment, kFull };

struct ScreeningConfig {
  double tau = 0.5;
  size_t max_tokens = 2048;  // per decoding path
  double temperature = 0.7;
  double top_p = 0.95;
  uint64_t seed = 0;
  StatScope stat_scope = StatScope::kSegment;
  features::StatParams stat_params;

  // Throws Error(kInvalidArgument).
  void validate() const;
};

enum class Decision { kAccept, kReject, kForceAccept };
std::string_view decision_name(Decision d);

struct GateEvent {
  size_t boundary_index = 0;
  uint64_t step = 0;  // decode step that completed the boundary
  double score = 0.0;
  Decision decision = Decision::kAccept;
  int attempt = 1;

  bool operator==(const GateEvent&) const = default;
};

struct ScreeningResult {
  std::string text;
  bool complete = true;  // false when max_tokens ran out first
  std::vector<GateEvent> step_log;
  trace::TokenTrace trace;
  size_t decoded_tokens = 0;  // including rejected segments
};

// Decodes from `source`. At every statement boundary the gate scores the
// hybrid feature of the current path; a score below tau rewinds to the
// last accepted boundary and resamples once, and a second low score is
// accepted anyway (logged as kForceAccept). A null gate decodes without
// screening. Throws Error(kDimensionMismatch) if the gate's width does not
// match the source's hidden width + 14, and wraps source errors as
// Error(kSourceFailure).
ScreeningResult generate(const std::string& prompt, TokenSource& source, Gate* gate,
                         const ScreeningConfig& cfg);

std::string step_log_json(const std::vector<GateEvent>& log);

}  // namespace forge::screening

#endif  // FORGE_SCREENING_DECODER_H_
