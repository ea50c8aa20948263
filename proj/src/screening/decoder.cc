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


#include "forge/screening/decoder.h"

#include <nlohmann/json.hpp>

#include <cmath>

#include "forge/util/error.h"
#include "forge/util/rng.h"
#include "forge/verilog/lexer.h"

namespace forge::screening {
namespace {

// Source errors surface as kSourceFailure; the original code stays in the
// message.
template <typename Fn>
auto guarded(const char* op, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSourceFailure) throw;
    throw Error(ErrorCode::kSourceFailure, std::string("token source ") + op + " failed: " +
                                               std::string(error_code_name(e.code())) + ": " +
                                               e.what());
  }
}

}  // namespace

void ScreeningConfig::validate() const {
  if (!(tau >= 0 && tau <= 1)) throw Error(ErrorCode::kInvalidArgument, "tau must be in [0, 1]");
  if (max_tokens == 0) throw Error(ErrorCode::kInvalidArgument, "max_tokens must be >= 1");
  if (!(temperature >= 0)) throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  if (!(top_p > 0 && top_p <= 1)) throw Error(ErrorCode::kInvalidArgument, "top_p in (0, 1]");
}

std::string_view decision_name(Decision d) {
  switch (d) {
    case Decision::kAccept: return "accept";
    case Decision::kReject: return "reject";
    case Decision::kForceAccept: return "force_accept";
  }
  return "accept";
}

ScreeningResult generate(const std::string& prompt, TokenSource& source, Gate* gate,
                         const ScreeningConfig& cfg) {
  cfg.validate();
  const SamplingParams sp{cfg.temperature, cfg.top_p, cfg.seed};
  guarded("begin", [&] { source.begin(prompt, sp); });
  const math::Matrix h0 = guarded("hidden", [&] { return source.hidden_states(); });
  const size_t dim = h0.cols();
  const size_t prompt_rows = h0.rows();
  if (dim == 0) throw Error(ErrorCode::kSourceFailure, "token source reports no hidden states");
  if (gate && gate->input_dim() != 0 && gate->input_dim() != dim + features::kNumStatFeatures) {
    throw Error(ErrorCode::kDimensionMismatch,
                "classifier expects " + std::to_string(gate->input_dim()) +
                    " features; source hidden width " + std::to_string(dim) + " + 14 = " +
                    std::to_string(dim + features::kNumStatFeatures));
  }

  ScreeningResult res;
  trace::TokenTrace& tr = res.trace;
  tr.header.trace_id = "gen-" + std::to_string(cfg.seed);
  tr.header.prompt = prompt;
  tr.header.source = source.describe();
  tr.header.seed = cfg.seed;
  tr.header.prompt_rows = static_cast<uint32_t>(prompt_rows);
  tr.header.hidden_dim = static_cast<uint32_t>(dim);
  std::vector<double> rows(h0.data());
  size_t row_count = prompt_rows;

  std::vector<size_t> path;  // record indices on the current path
  std::vector<features::TokenStep> path_steps;
  auto assign_rows = [&](const math::Matrix& h) {
    if (h.cols() != dim || h.rows() != prompt_rows + path.size()) {
      throw Error(ErrorCode::kSourceFailure,
                  "hidden states have shape " + std::to_string(h.rows()) + "x" +
                      std::to_string(h.cols()) + ", expected " +
                      std::to_string(prompt_rows + path.size()) + "x" + std::to_string(dim));
    }
    for (size_t k = 0; k < path.size(); ++k) {
      trace::TraceRecord& r = tr.records[path[k]];
      if (r.hidden_ref) continue;
      rows.insert(rows.end(), h.row(prompt_rows + k), h.row(prompt_rows + k) + dim);
      r.hidden_ref = static_cast<uint32_t>(row_count++);
    }
  };

  std::string accepted;
  std::string segment;
  size_t segment_start = 0;
  size_t lex_origin = 0;
  int attempt = 1;
  size_t boundary_index = 0;
  uint64_t step_no = 0;
  Checkpoint checkpoint;
  if (gate) checkpoint = guarded("snapshot", [&] { return source.snapshot(); });

  auto accept = [&](Decision d, double score, const std::string& full, size_t boundary_begin) {
    res.step_log.push_back({boundary_index, step_no - 1, score, d, attempt});
    accepted = full;
    segment.clear();
    segment_start = path.size();
    lex_origin = boundary_begin;
    attempt = 1;
    ++boundary_index;
  };

  while (true) {
    if (path.size() >= cfg.max_tokens) {
      res.complete = false;
      break;
    }
    const SourceStep step = guarded("next", [&] { return source.next(); });
    if (step.eos) break;
    if (!std::isfinite(step.nll) || step.nll < 0 || !std::isfinite(step.entropy) ||
        step.entropy < 0) {
      throw Error(ErrorCode::kSourceFailure, "token source returned invalid nll/entropy");
    }
    trace::TraceRecord rec;
    rec.step = step_no++;
    rec.token_text = step.text;
    rec.token_id = step.token_id;
    rec.nll = step.nll;
    rec.entropy = step.entropy;
    rec.token_class = features::classify_token_text(step.text);
    rec.attempt = attempt;
    tr.records.push_back(rec);
    path.push_back(tr.records.size() - 1);
    path_steps.push_back({step.text, rec.token_class, step.nll, step.entropy});
    segment += step.text;
    ++res.decoded_tokens;

    const std::string full = accepted + segment;
    const std::vector<verilog::Token> toks =
        verilog::lex(std::string_view(full).substr(lex_origin));
    if (!verilog::classify_boundary(toks)) continue;
    const verilog::Token* last = nullptr;
    for (auto it = toks.rbegin(); it != toks.rend(); ++it) {
      if (!it->is_trivia()) {
        last = &*it;
        break;
      }
    }
    // Only the step that completes the boundary token counts; trailing
    // whitespace after it does not re-trigger the gate.
    if (lex_origin + last->span.end <= full.size() - step.text.size()) continue;
    tr.records.back().is_boundary = true;
    const size_t boundary_begin = lex_origin + last->span.begin;

    if (!gate) {
      accept(Decision::kAccept, 1.0, full, boundary_begin);
      res.step_log.pop_back();
      continue;
    }
    const math::Matrix h = guarded("hidden", [&] { return source.hidden_states(); });
    assign_rows(h);
    const std::vector<features::TokenStep> steps(
        path_steps.begin() + static_cast<long>(cfg.stat_scope == StatScope::kSegment
                                                   ? segment_start
                                                   : 0),
        path_steps.end());
    const features::HybridFeature f = features::compute_hybrid(h, steps, cfg.stat_params);
    const double score = gate->score({f.combined, segment, full});
    if (score >= cfg.tau) {
      accept(Decision::kAccept, score, full, boundary_begin);
    } else if (attempt == 1) {
      res.step_log.push_back({boundary_index, step_no - 1, score, Decision::kReject, attempt});
      guarded("restore", [&] {
        source.restore(checkpoint, derive_seed(cfg.seed, boundary_index + 1));
      });
      path.resize(segment_start);
      path_steps.resize(segment_start);
      segment.clear();
      attempt = 2;
      continue;
    } else {
      accept(Decision::kForceAccept, score, full, boundary_begin);
    }
    checkpoint = guarded("snapshot", [&] { return source.snapshot(); });
  }

  res.text = accepted + segment;
  bool missing = false;
  for (size_t k : path) missing = missing || !tr.records[k].hidden_ref;
  if (missing) assign_rows(guarded("hidden", [&] { return source.hidden_states(); }));
  tr.hidden = math::Matrix(row_count, dim);
  tr.hidden.data() = std::move(rows);
  tr.header.complete = res.complete;
  return res;
}

std::string step_log_json(const std::vector<GateEvent>& log) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const GateEvent& e : log) {
    nlohmann::ordered_json j;
    j["boundary_index"] = e.boundary_index;
    j["step"] = e.step;
    j["score"] = e.score;
    j["decision"] = decision_name(e.decision);
    j["attempt"] = e.attempt;
    arr.push_back(j);
  }
  return arr.dump();
}

}  // namespace forge::screening
