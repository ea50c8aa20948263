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


#include "forge/trace/trace.h"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/json_reader.h"

namespace forge::trace {

using nlohmann::ordered_json;

namespace {

constexpr char kHiddenMagic[4] = {'V', 'C', 'L', 'H'};

ordered_json header_json(const TraceHeader& h) {
  ordered_json j;
  j["schema"] = kTraceSchema;
  j["schema_version"] = kTraceSchemaVersion;
  j["trace_id"] = h.trace_id;
  j["prompt"] = h.prompt;
  j["source"] = h.source;
  j["seed"] = h.seed;
  j["entropy_unit"] = h.entropy_unit;
  j["pooling"] = h.pooling;
  j["hidden_file"] = h.hidden_file;
  j["prompt_rows"] = h.prompt_rows;
  j["hidden_dim"] = h.hidden_dim;
  j["complete"] = h.complete;
  if (h.label) j["label"] = *h.label;
  return j;
}

ordered_json record_json(const TraceRecord& r) {
  ordered_json j;
  j["step"] = r.step;
  j["token_text"] = r.token_text;
  j["token_id"] = r.token_id;
  j["nll"] = r.nll;
  j["entropy"] = r.entropy;
  j["token_class"] = features::token_class_name(r.token_class);
  j["is_boundary"] = r.is_boundary;
  j["attempt"] = r.attempt;
  j["hidden_ref"] = r.hidden_ref ? ordered_json(*r.hidden_ref) : ordered_json(nullptr);
  return j;
}

TraceHeader read_header(const nlohmann::json& j) {
  JsonReader r(j, "line 1 (header)");
  if (r.str("schema") != kTraceSchema) r.fail("not a forge trace");
  const uint64_t version = r.u64("schema_version");
  if (version != kTraceSchemaVersion) {
    r.fail("unsupported schema_version " + std::to_string(version));
  }
  TraceHeader h;
  h.trace_id = r.str("trace_id");
  h.prompt = r.str("prompt");
  h.source = r.str("source");
  h.seed = r.u64("seed");
  h.entropy_unit = r.str("entropy_unit");
  if (h.entropy_unit != "nats") r.fail("entropy_unit must be nats");
  h.pooling = r.str("pooling");
  h.hidden_file = r.str("hidden_file");
  h.prompt_rows = static_cast<uint32_t>(r.u64("prompt_rows"));
  h.hidden_dim = static_cast<uint32_t>(r.u64("hidden_dim"));
  h.complete = r.boolean("complete");
  if (r.optional("label")) {
    const int64_t label = r.i64("label");
    if (label != 0 && label != 1) r.fail("label must be 0 or 1");
    h.label = static_cast<int>(label);
  }
  r.done();
  return h;
}

TraceRecord read_record(const nlohmann::json& j, const std::string& where) {
  JsonReader r(j, where);
  TraceRecord rec;
  rec.step = r.u64("step");
  rec.token_text = r.str("token_text");
  rec.token_id = r.i64("token_id");
  rec.nll = r.real("nll");
  rec.entropy = r.real("entropy");
  const std::string cls = r.str("token_class");
  try {
    rec.token_class = features::parse_token_class(cls);
  } catch (const Error&) {
    r.fail("unknown token_class '" + cls + "'");
  }
  rec.is_boundary = r.boolean("is_boundary");
  const uint64_t attempt = r.u64("attempt");
  if (attempt != 1 && attempt != 2) r.fail("attempt must be 1 or 2");
  rec.attempt = static_cast<int>(attempt);
  if (r.optional("hidden_ref")) rec.hidden_ref = static_cast<uint32_t>(r.u64("hidden_ref"));
  r.done();
  return rec;
}

}  // namespace

void write_hidden(const std::filesystem::path& path, const math::Matrix& h) {
  std::ostringstream out;
  out.write(kHiddenMagic, 4);
  put_u32(out, static_cast<uint32_t>(h.rows()));
  put_u32(out, static_cast<uint32_t>(h.cols()));
  for (double v : h.data()) put_f32(out, static_cast<float>(v));
  write_file(path, out.str());
}

math::Matrix read_hidden(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIo, "missing hidden-state sidecar " + path.string());
  }
  std::istringstream in(read_file(path));
  char magic[4];
  if (!in.read(magic, 4) || std::string_view(magic, 4) != std::string_view(kHiddenMagic, 4)) {
    throw Error(ErrorCode::kSchema, path.string() + ": bad sidecar magic");
  }
  try {
    const uint32_t rows = get_u32(in);
    const uint32_t cols = get_u32(in);
    math::Matrix h(rows, cols);
    for (double& v : h.data()) v = get_f32(in);
    if (in.peek() != std::char_traits<char>::eof()) {
      throw Error(ErrorCode::kSchema, path.string() + ": trailing bytes in sidecar");
    }
    return h;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchema) throw;
    throw Error(ErrorCode::kSchema, path.string() + ": truncated sidecar");
  }
}

void write_trace(const std::filesystem::path& path, const TokenTrace& trace) {
  std::string out = header_json(trace.header).dump() + "\n";
  for (const TraceRecord& r : trace.records) out += record_json(r).dump() + "\n";
  write_file(path, out);
  if (!trace.hidden.empty()) {
    if (trace.header.hidden_file.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "trace has hidden states but no hidden_file");
    }
    write_hidden(path.parent_path() / trace.header.hidden_file, trace.hidden);
  }
}

TokenTrace parse_trace(const std::string& text) {
  TokenTrace t;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kSchema, "line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!have_header) {
      t.header = read_header(j);
      have_header = true;
      continue;
    }
    t.records.push_back(read_record(j, "line " + std::to_string(lineno)));
  }
  if (!have_header) throw Error(ErrorCode::kSchema, "trace has no header line");
  return t;
}

TokenTrace read_trace(const std::filesystem::path& path, bool load_hidden) {
  TokenTrace t = parse_trace(read_file(path));
  if (load_hidden) {
    if (t.header.hidden_file.empty()) {
      throw Error(ErrorCode::kIo, path.string() + ": trace names no hidden-state sidecar");
    }
    t.hidden = read_hidden(path.parent_path() / t.header.hidden_file);
    if (t.hidden.cols() != t.header.hidden_dim) {
      throw Error(ErrorCode::kSchema, path.string() + ": sidecar width " +
                                          std::to_string(t.hidden.cols()) + " != hidden_dim " +
                                          std::to_string(t.header.hidden_dim));
    }
    for (const TraceRecord& r : t.records) {
      if (r.hidden_ref && *r.hidden_ref >= t.hidden.rows()) {
        throw Error(ErrorCode::kSchema, path.string() + ": hidden_ref " +
                                            std::to_string(*r.hidden_ref) + " out of range");
      }
    }
  }
  return t;
}

std::vector<size_t> final_path(const TokenTrace& trace) {
  struct Segment {
    size_t begin;
    size_t end;
    int attempt;
  };
  std::vector<Segment> segments;
  const auto& recs = trace.records;
  for (size_t i = 0; i < recs.size();) {
    size_t j = i;
    while (j < recs.size() && recs[j].attempt == recs[i].attempt && !recs[j].is_boundary) ++j;
    if (j < recs.size() && recs[j].attempt == recs[i].attempt) ++j;  // include the boundary
    segments.push_back({i, j, recs[i].attempt});
    i = j;
  }
  std::vector<size_t> out;
  for (size_t s = 0; s < segments.size(); ++s) {
    const bool rejected = segments[s].attempt == 1 && s + 1 < segments.size() &&
                          segments[s + 1].attempt == 2;
    if (rejected) continue;
    for (size_t i = segments[s].begin; i < segments[s].end; ++i) out.push_back(i);
  }
  return out;
}

std::vector<features::TokenStep> steps_of(const TokenTrace& trace,
                                          const std::vector<size_t>& indices) {
  std::vector<features::TokenStep> steps;
  steps.reserve(indices.size());
  for (size_t i : indices) {
    const TraceRecord& r = trace.records.at(i);
    steps.push_back({r.token_text, r.token_class, r.nll, r.entropy});
  }
  return steps;
}

math::Matrix hidden_of(const TokenTrace& trace, const std::vector<size_t>& indices) {
  const size_t d = trace.hidden.cols();
  if (trace.header.prompt_rows > trace.hidden.rows()) {
    throw Error(ErrorCode::kSchema, "prompt_rows exceeds the sidecar length");
  }
  math::Matrix h(trace.header.prompt_rows + indices.size(), d);
  size_t row = 0;
  for (; row < trace.header.prompt_rows; ++row) {
    std::copy(trace.hidden.row(row), trace.hidden.row(row) + d, h.row(row));
  }
  for (size_t i : indices) {
    const TraceRecord& r = trace.records.at(i);
    if (!r.hidden_ref) {
      throw Error(ErrorCode::kSchema, "record " + std::to_string(r.step) + " has no hidden row");
    }
    std::copy(trace.hidden.row(*r.hidden_ref), trace.hidden.row(*r.hidden_ref) + d, h.row(row++));
  }
  return h;
}

std::string final_text(const TokenTrace& trace) {
  std::string out;
  for (size_t i : final_path(trace)) out += trace.records[i].token_text;
  return out;
}

}  // namespace forge::trace
