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


#include "forge/screening/source.h"

#include <cmath>

#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/rng.h"
#include "forge/verilog/lexer.h"

namespace forge::screening {

ScriptSpec ScriptSpec::parse(std::string_view text) {
  ScriptSpec spec;
  for (const std::string& field : split_list(text, ',')) {
    const size_t eq = field.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "script field '" + field + "' is not key=value");
    }
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    try {
      size_t used = 0;
      if (key == "statements") {
        spec.statements = std::stoul(value, &used);
      } else if (key == "bad") {
        spec.bad_probability = std::stod(value, &used);
      } else if (key == "dim") {
        spec.hidden_dim = std::stoul(value, &used);
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown script key '" + key + "'");
      }
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidArgument, "bad value for script key '" + key + "'");
    }
  }
  if (!(spec.bad_probability >= 0 && spec.bad_probability <= 1) || spec.hidden_dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "script needs 0 <= bad <= 1 and dim >= 1");
  }
  return spec;
}

std::string ScriptSpec::to_string() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "statements=%zu,bad=%g,dim=%zu", statements, bad_probability,
                hidden_dim);
  return buf;
}

bool ScriptedSource::is_bad_segment(std::string_view text) {
  return text.find("&;") != std::string_view::npos;
}

ScriptedSource::Statement ScriptedSource::statement(size_t index, uint64_t seed) const {
  Statement st;
  if (index == spec_.statements) {
    st.tokens = {"\nendmodule\n"};
    return st;
  }
  Rng rng(derive_seed(seed, index));
  st.bad = rng.bernoulli(spec_.bad_probability);
  const std::string k = std::to_string(index);
  st.tokens = {"\n  assign", " s" + k, " =", " a" + k, " &"};
  if (!st.bad) st.tokens.push_back(" b" + k);
  st.tokens.push_back(";");
  return st;
}

std::vector<double> ScriptedSource::row_for(std::string_view prev, std::string_view text) const {
  Rng rng(derive_seed(fnv1a(prev), fnv1a(text)));
  std::vector<double> row(spec_.hidden_dim);
  for (double& v : row) v = static_cast<float>(rng.normal());
  return row;
}

void ScriptedSource::begin(const std::string& prompt, const SamplingParams& params) {
  rows_.clear();
  checkpoints_.clear();
  std::string prev;
  for (const verilog::Token& t : verilog::lex(prompt)) {
    if (t.is_trivia()) continue;
    rows_.push_back(row_for(prev, t.text));
    prev = t.text;
  }
  if (rows_.empty()) rows_.push_back(row_for("", ""));
  prompt_rows_ = rows_.size();
  state_ = State{};
  state_.seed = params.seed;
  state_.prev = prev;
  have_current_ = false;
}

SourceStep ScriptedSource::next() {
  SourceStep step;
  if (state_.statement > spec_.statements) {
    step.eos = true;
    return step;
  }
  if (!have_current_) {
    current_ = statement(state_.statement, state_.seed);
    have_current_ = true;
  }
  step.text = current_.tokens[state_.token];
  step.token_id = static_cast<int64_t>(fnv1a(step.text) % 50000);
  Rng rng(derive_seed(derive_seed(state_.seed, state_.statement), 1000 + state_.token));
  step.nll = 0.05 + 0.4 * std::abs(rng.normal());
  const bool last = state_.token + 1 == current_.tokens.size();
  if (current_.bad && last) step.nll += 2.5;
  step.entropy = 0.3 + 0.5 * rng.uniform() + 0.2 * step.nll;
  rows_.push_back(row_for(state_.prev, step.text));
  state_.prev = step.text;
  ++state_.path_len;
  if (last) {
    ++state_.statement;
    state_.token = 0;
    have_current_ = false;
  } else {
    ++state_.token;
  }
  return step;
}

Checkpoint ScriptedSource::snapshot() {
  const Checkpoint id = "cp" + std::to_string(checkpoints_.size());
  checkpoints_[id] = state_;
  return id;
}

void ScriptedSource::restore(const Checkpoint& checkpoint, uint64_t attempt_seed) {
  const auto it = checkpoints_.find(checkpoint);
  if (it == checkpoints_.end()) {
    throw Error(ErrorCode::kSourceFailure, "unknown checkpoint '" + checkpoint + "'");
  }
  state_ = it->second;
  state_.seed = attempt_seed;
  rows_.resize(prompt_rows_ + state_.path_len);
  have_current_ = false;
}

math::Matrix ScriptedSource::hidden_states() { return math::Matrix::from_rows(rows_); }

ReplaySource::ReplaySource(trace::TokenTrace trace) : trace_(std::move(trace)) {
  if (trace_.hidden.empty()) {
    throw Error(ErrorCode::kIo, "replay needs the hidden-state sidecar of trace '" +
                                    trace_.header.trace_id + "'");
  }
  const auto& recs = trace_.records;
  std::vector<std::pair<int, std::vector<size_t>>> segments;
  for (size_t i = 0; i < recs.size();) {
    std::vector<size_t> seg;
    const int attempt = recs[i].attempt;
    size_t j = i;
    while (j < recs.size() && recs[j].attempt == attempt) {
      seg.push_back(j);
      if (recs[j++].is_boundary) break;
    }
    segments.emplace_back(attempt, std::move(seg));
    i = j;
  }
  for (size_t s = 0; s < segments.size(); ++s) {
    if (segments[s].first == 2) {
      if (slots_.empty() || !slots_.back().alternate.empty()) {
        throw Error(ErrorCode::kSchema, "attempt-2 segment without a rejected attempt-1 segment");
      }
      slots_.back().alternate = segments[s].second;
      continue;
    }
    slots_.push_back({segments[s].second, {}});
  }
}

const std::vector<size_t>& ReplaySource::tokens_of(const Position& p) const {
  return p.attempt == 2 ? slots_[p.slot].alternate : slots_[p.slot].primary;
}

void ReplaySource::begin(const std::string&, const SamplingParams&) {
  pos_ = Position{};
  path_.clear();
  checkpoints_.clear();
}

SourceStep ReplaySource::next() {
  while (pos_.slot < slots_.size()) {
    const std::vector<size_t>& toks = tokens_of(pos_);
    if (pos_.index < toks.size()) {
      const trace::TraceRecord& r = trace_.records[toks[pos_.index++]];
      path_.push_back(toks[pos_.index - 1]);
      SourceStep step;
      step.text = r.token_text;
      step.token_id = r.token_id;
      step.nll = r.nll;
      step.entropy = r.entropy;
      return step;
    }
    pos_ = Position{pos_.slot + 1, 1, 0};
  }
  SourceStep eos;
  eos.eos = true;
  return eos;
}

Checkpoint ReplaySource::snapshot() {
  Position p = pos_;
  if (p.slot < slots_.size() && p.index >= tokens_of(p).size()) p = Position{p.slot + 1, 1, 0};
  const Checkpoint id = "cp" + std::to_string(checkpoints_.size());
  checkpoints_[id] = {p, path_.size()};
  return id;
}

void ReplaySource::restore(const Checkpoint& checkpoint, uint64_t) {
  const auto it = checkpoints_.find(checkpoint);
  if (it == checkpoints_.end()) {
    throw Error(ErrorCode::kSourceFailure, "unknown checkpoint '" + checkpoint + "'");
  }
  pos_ = it->second.first;
  path_.resize(it->second.second);
  if (pos_.slot < slots_.size()) {
    pos_.attempt = slots_[pos_.slot].alternate.empty() ? 1 : 2;
    pos_.index = 0;
  }
}

math::Matrix ReplaySource::hidden_states() { return trace::hidden_of(trace_, path_); }

}  // namespace forge::screening
