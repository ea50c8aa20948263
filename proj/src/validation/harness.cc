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


#include "forge/validation/harness.h"

#include <nlohmann/json.hpp>

#include <sstream>

#include "forge/positive/transforms.h"
#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/process.h"
#include "forge/verilog/lexer.h"
#include "forge/verilog/parser.h"
#include "forge/verilog/semantic.h"

namespace forge::validation {

namespace {

constexpr const char* kDesignFile = "design.v";
constexpr const char* kAnchorFile = "anchor.v";
constexpr const char* kTbFile = "tb.v";
constexpr const char* kOutFile = "sim.out";

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::string expand(const std::string& tmpl, const std::string& top) {
  std::string s = replace_all(tmpl, "{design}", kDesignFile);
  s = replace_all(s, "{anchor}", kAnchorFile);
  s = replace_all(s, "{tb}", kTbFile);
  s = replace_all(s, "{out}", kOutFile);
  return replace_all(s, "{top}", top);
}

std::string top_name(std::string_view source) {
  const auto tokens = verilog::lex(source);
  bool after_module = false;
  for (const auto& t : tokens) {
    if (t.is_trivia()) continue;
    if (after_module) return t.kind == verilog::TokenKind::kIdentifier ? t.text : "";
    after_module = t.is(verilog::TokenKind::kKeyword, "module");
  }
  return "";
}

struct RunSummary {
  int passed = 0;
  int failed = 0;
  int timed_out = 0;
  std::vector<std::string> outputs;
  std::string log;
};

RunSummary run_repeated(const std::string& command, const std::filesystem::path& cwd,
                        const ToolConfig& cfg) {
  RunSummary s;
  for (int i = 0; i < cfg.repeat; ++i) {
    const ProcessResult r = run_command(command, cwd, cfg.timeout);
    std::ostringstream head;
    head << "$ " << command << "\n[run " << (i + 1) << "] ";
    if (r.timed_out) {
      ++s.timed_out;
      head << "timed out after " << cfg.timeout << "s";
    } else {
      (r.exit_code == 0 ? s.passed : s.failed)++;
      head << "exit " << r.exit_code;
    }
    s.log += head.str() + "\n" + r.output;
    if (!s.log.empty() && s.log.back() != '\n') s.log += '\n';
    s.outputs.push_back(r.output);
  }
  return s;
}

Verdict indeterminate(std::string log, int runs, std::string backend) {
  Verdict v;
  v.status = Status::kIndeterminate;
  v.tool_log = std::move(log);
  v.runs = runs;
  v.backend = std::move(backend);
  return v;
}

// Both sources must be inside the internal subset for simulation.
struct ParsedPair {
  verilog::SourceUnit anchor;
  verilog::SourceUnit candidate;
};

std::optional<ParsedPair> parse_pair(const std::string& candidate, const std::string& anchor,
                                     std::string* why) {
  verilog::FrontendCheck a = verilog::check_source(anchor);
  if (!a.ok() || a.unit.modules.empty()) {
    throw Error(ErrorCode::kAnchorInvalid, "anchor does not pass the frontend: " + a.summary());
  }
  verilog::FrontendCheck c = verilog::check_source(candidate);
  if (!c.ok() || c.unit.modules.empty()) {
    *why = "candidate is outside the simulated subset: " + c.summary();
    return std::nullopt;
  }
  return ParsedPair{std::move(a.unit), std::move(c.unit)};
}

}  // namespace

std::string_view status_name(Status s) {
  switch (s) {
    case Status::kCompileFail: return "CompileFail";
    case Status::kFuncMismatch: return "FuncMismatch";
    case Status::kEquivalent: return "Equivalent";
    case Status::kIndeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

Status parse_status(std::string_view name) {
  for (Status s : {Status::kCompileFail, Status::kFuncMismatch, Status::kEquivalent,
                   Status::kIndeterminate}) {
    if (status_name(s) == name) return s;
  }
  throw Error(ErrorCode::kSchema, "unknown verdict status '" + std::string(name) + "'");
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kAuto: return "auto";
    case Backend::kExternal: return "external";
    case Backend::kInternal: return "internal";
  }
  return "auto";
}

Backend parse_backend(std::string_view name) {
  for (Backend b : {Backend::kAuto, Backend::kExternal, Backend::kInternal}) {
    if (backend_name(b) == name) return b;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown backend '" + std::string(name) + "'");
}

ToolConfig ToolConfig::defaults() {
  std::string yosys = "yosys";
  if (!find_executable(yosys) && find_executable("yowasp-yosys")) yosys = "yowasp-yosys";
  ToolConfig cfg;
  cfg.compile_cmd =
      yosys + " -q -p 'read_verilog {design}; hierarchy -check -auto-top; proc; check -assert'";
  cfg.sim_cmd = "iverilog -g2005 -o {out} {tb} {anchor} {design} && vvp -n {out}";
  cfg.equiv_cmd = yosys +
                  " -q -p 'read_verilog {anchor}; prep -top {top}; memory; rename {top} gold;"
                  " design -stash gold; read_verilog {design}; prep -top {top}; memory;"
                  " rename {top} gate; design -stash gate;"
                  " design -copy-from gold -as gold gold; design -copy-from gate -as gate gate;"
                  " equiv_make gold gate equiv; hierarchy -top equiv; async2sync;"
                  " equiv_simple -seq 5; equiv_induct -seq 5; equiv_status -assert'";
  return cfg;
}

ToolConfig ToolConfig::from_config(const KvConfig& kv) {
  ToolConfig cfg = defaults();
  auto str = [&](const char* a, const char* b) {
    if (auto v = kv.get_string(a)) return v;
    return kv.get_string(b);
  };
  auto num = [&](const char* a, const char* b) {
    if (auto v = kv.get_double(a)) return v;
    return kv.get_double(b);
  };
  if (auto v = str("compile_cmd", "tools.compile_cmd")) cfg.compile_cmd = *v;
  if (auto v = str("sim_cmd", "tools.sim_cmd")) cfg.sim_cmd = *v;
  if (auto v = str("equiv_cmd", "tools.equiv_cmd")) cfg.equiv_cmd = *v;
  if (auto v = str("backend", "tools.backend")) cfg.backend = parse_backend(*v);
  if (auto v = num("timeout", "tools.timeout")) cfg.timeout = *v;
  if (auto v = num("repeat", "tools.repeat")) cfg.repeat = static_cast<int>(*v);
  if (auto v = num("jobs", "tools.jobs")) cfg.jobs = static_cast<int>(*v);
  if (auto v = num("stimulus.comb_vectors", "tools.comb_vectors")) {
    cfg.stimulus.comb_vectors = static_cast<size_t>(*v);
  }
  if (auto v = num("stimulus.seq_cycles", "tools.seq_cycles")) {
    cfg.stimulus.seq_cycles = static_cast<size_t>(*v);
  }
  if (auto v = num("stimulus.exhaustive_input_bits", "tools.exhaustive_input_bits")) {
    cfg.limits.exhaustive_input_bits = static_cast<int>(*v);
  }
  cfg.validate();
  return cfg;
}

ToolConfig ToolConfig::load(const std::filesystem::path& path) {
  return from_config(KvConfig::load(path));
}

void ToolConfig::validate() const {
  for (const auto* cmd : {&compile_cmd, &sim_cmd, &equiv_cmd}) {
    if (cmd->find("{design}") == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "tool command lacks a {design} placeholder: " + *cmd);
    }
  }
  if (!(timeout > 0)) throw Error(ErrorCode::kInvalidArgument, "timeout must be positive");
  if (repeat < 1) throw Error(ErrorCode::kInvalidArgument, "repeat must be at least 1");
  if (jobs < 1) throw Error(ErrorCode::kInvalidArgument, "jobs must be at least 1");
}

std::string command_program(const std::string& command) {
  const size_t begin = command.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const size_t end = command.find_first_of(" \t", begin);
  return command.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
}

std::string rename_top(std::string_view source, std::string_view new_name) {
  const auto tokens = verilog::lex(source);
  bool after_module = false;
  for (const auto& t : tokens) {
    if (t.is_trivia()) continue;
    if (after_module) {
      if (t.kind != verilog::TokenKind::kIdentifier) break;
      std::string out(source);
      out.replace(t.span.begin, t.span.size(), new_name);
      return out;
    }
    after_module = t.is(verilog::TokenKind::kKeyword, "module");
  }
  return std::string(source);
}

Harness::Harness(ToolConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

bool Harness::uses_external(const std::string& command) const {
  if (cfg_.backend == Backend::kInternal) return false;
  const bool found = find_executable(command_program(command)).has_value();
  if (cfg_.backend == Backend::kExternal && !found) {
    throw Error(ErrorCode::kToolUnavailable,
                "'" + command_program(command) + "' is not on PATH");
  }
  return found;
}

Verdict Harness::check_compile(const std::string& candidate) const {
  if (!uses_external(cfg_.compile_cmd)) {
    const verilog::FrontendCheck check = verilog::check_source(candidate);
    Verdict v;
    v.runs = 1;
    v.backend = "internal";
    v.compiled = check.ok();
    v.status = v.compiled ? Status::kIndeterminate : Status::kCompileFail;
    v.tool_log = check.ok() ? "frontend: ok\n" : check.summary();
    return v;
  }
  ScratchDir dir("forge-compile");
  write_file(dir.path() / kDesignFile, candidate);
  const RunSummary s =
      run_repeated(expand(cfg_.compile_cmd, top_name(candidate)), dir.path(), cfg_);
  Verdict v = indeterminate(s.log, cfg_.repeat, "external");
  if (s.failed == cfg_.repeat) {
    v.status = Status::kCompileFail;
  } else if (s.passed == cfg_.repeat) {
    v.compiled = true;
  }
  return v;
}

Verdict Harness::internal_functional(const std::string& candidate, const std::string& anchor,
                                     uint64_t stim_seed) const {
  std::string why;
  const auto parsed = parse_pair(candidate, anchor, &why);
  if (!parsed) return indeterminate(why, 0, "internal");
  const auto& a = parsed->anchor.modules.front();
  const auto& c = parsed->candidate.modules.front();
  require_same_ports(a, c);
  try {
    const Stimulus st = make_stimulus(a, stim_seed, cfg_.stimulus);
    const auto m = compare_outputs(a, c, st);
    Verdict v;
    v.runs = 1;
    v.backend = "internal";
    if (m) {
      v.status = Status::kFuncMismatch;
      v.tool_log = "mismatch at " + m->describe() + "\n";
    } else {
      v.status = Status::kEquivalent;
      v.tool_log = "outputs agree over " + std::to_string(st.vectors.size()) + " stimulus steps\n";
    }
    return v;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kPortMismatch) throw;
    return indeterminate(std::string("simulation failed: ") + e.what() + "\n", 1, "internal");
  }
}

Verdict Harness::check_functional(const std::string& candidate, const std::string& anchor,
                                  uint64_t stim_seed) const {
  if (!uses_external(cfg_.sim_cmd)) return internal_functional(candidate, anchor, stim_seed);
  verilog::FrontendCheck a = verilog::check_source(anchor);
  if (!a.ok() || a.unit.modules.empty()) {
    throw Error(ErrorCode::kAnchorInvalid, "anchor does not pass the frontend: " + a.summary());
  }
  const verilog::FrontendCheck c = verilog::check_source(candidate);
  if (c.ok() && !c.unit.modules.empty()) {
    require_same_ports(a.unit.modules.front(), c.unit.modules.front());
  }
  const auto& am = a.unit.modules.front();
  const Stimulus st = make_stimulus(am, stim_seed, cfg_.stimulus);
  ScratchDir dir("forge-sim");
  write_file(dir.path() / kAnchorFile, rename_top(anchor, kGoldTop));
  write_file(dir.path() / kDesignFile, rename_top(candidate, kGateTop));
  write_file(dir.path() / kTbFile,
             make_testbench(am, st, std::string(kGoldTop), std::string(kGateTop)));
  const RunSummary s = run_repeated(expand(cfg_.sim_cmd, std::string(kGoldTop)), dir.path(), cfg_);
  int mismatched = 0;
  int agreed = 0;
  for (size_t i = 0; i < s.outputs.size(); ++i) {
    const std::string& out = s.outputs[i];
    const bool done = out.find("DONE") != std::string::npos;
    if (out.find("MISMATCH") != std::string::npos) {
      ++mismatched;
    } else if (done) {
      ++agreed;
    }
  }
  Verdict v = indeterminate(s.log, cfg_.repeat, "external");
  if (s.timed_out == 0 && mismatched == cfg_.repeat) v.status = Status::kFuncMismatch;
  if (s.timed_out == 0 && agreed == cfg_.repeat && s.passed == cfg_.repeat) {
    v.status = Status::kEquivalent;
  }
  return v;
}

Verdict Harness::internal_equivalent(const std::string& candidate,
                                     const std::string& anchor) const {
  std::string why;
  const auto parsed = parse_pair(candidate, anchor, &why);
  if (!parsed) return indeterminate(why, 0, "internal");
  Verdict v;
  v.runs = 1;
  v.backend = "internal";
  if (positive::alpha_equivalent(parsed->anchor, parsed->candidate)) {
    v.status = Status::kEquivalent;
    v.tool_log = "alpha-equivalent to the anchor\n";
    return v;
  }
  const auto& a = parsed->anchor.modules.front();
  const auto& c = parsed->candidate.modules.front();
  ProofResult r;
  try {
    r = prove_equivalent(a, c, cfg_.limits);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kPortMismatch) throw;
    return indeterminate(std::string("proof failed: ") + e.what() + "\n", 1, "internal");
  }
  v.tool_log = r.detail + "\n";
  switch (r.outcome) {
    case ProofOutcome::kEquivalent: v.status = Status::kEquivalent; break;
    case ProofOutcome::kMismatch: v.status = Status::kFuncMismatch; break;
    case ProofOutcome::kUnknown: v.status = Status::kIndeterminate; break;
  }
  return v;
}

Verdict Harness::check_equivalent(const std::string& candidate, const std::string& anchor) const {
  if (!uses_external(cfg_.equiv_cmd)) return internal_equivalent(candidate, anchor);
  const std::string top = top_name(anchor);
  if (top.empty()) throw Error(ErrorCode::kAnchorInvalid, "anchor has no module header");
  ScratchDir dir("forge-equiv");
  auto run = [&](const std::string& gold, const std::string& gate) {
    write_file(dir.path() / kAnchorFile, gold);
    write_file(dir.path() / kDesignFile, rename_top(gate, top));
    return run_repeated(expand(cfg_.equiv_cmd, top), dir.path(), cfg_);
  };
  RunSummary s = run(anchor, candidate);
  Verdict v = indeterminate(s.log, cfg_.repeat, "external");
  if (s.failed == cfg_.repeat) {
    // Register and memory matching is by name, so a renamed state element
    // stays unproven. Retry with both sides' internal names canonicalized.
    const verilog::SourceUnit a = verilog::parse(anchor);
    const verilog::SourceUnit c = verilog::parse(candidate);
    if (!a.has_errors() && !c.has_errors()) {
      s = run(positive::canonical_names_source(a), positive::canonical_names_source(c));
      v.tool_log += "retry with canonical internal names:\n" + s.log;
    }
  }
  if (s.passed == cfg_.repeat) {
    v.status = Status::kEquivalent;
  } else if (s.failed == cfg_.repeat) {
    // The external flow is incomplete (it can fail to prove true
    // equivalences), so a failure only counts with a counterexample.
    try {
      const Verdict sim = internal_equivalent(candidate, anchor);
      if (sim.status == Status::kFuncMismatch) {
        v.status = Status::kFuncMismatch;
        v.tool_log += "counterexample: " + sim.tool_log;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPortMismatch) throw;
      v.tool_log += std::string(e.what()) + "\n";
    }
  }
  return v;
}

Verdict Harness::classify_negative(const std::string& candidate, const std::string& anchor,
                                   uint64_t stim_seed) const {
  Verdict compile = check_compile(candidate);
  if (!compile.compiled) return compile;
  try {
    Verdict f = check_functional(candidate, anchor, stim_seed);
    f.compiled = true;
    f.tool_log = compile.tool_log + f.tool_log;
    return f;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPortMismatch) throw;
    compile.tool_log += std::string(e.what()) + "\n";
    return compile;
  }
}

Verdict Harness::classify_positive(const std::string& candidate,
                                   const std::string& anchor) const {
  Verdict compile = check_compile(candidate);
  if (!compile.compiled) return compile;
  try {
    Verdict e = check_equivalent(candidate, anchor);
    e.compiled = true;
    e.tool_log = compile.tool_log + e.tool_log;
    return e;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPortMismatch) throw;
    compile.tool_log += std::string(e.what()) + "\n";
    return compile;
  }
}

std::vector<Verdict> classify_batch(const Harness& harness, const std::vector<Job>& jobs) {
  std::vector<Verdict> out(jobs.size());
  std::vector<std::string> errors(jobs.size());
  const long n = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(harness.config().jobs)
  for (long i = 0; i < n; ++i) {
    const Job& j = jobs[static_cast<size_t>(i)];
    try {
      out[static_cast<size_t>(i)] =
          j.role == Role::kNegative ? harness.classify_negative(j.candidate, j.anchor, j.stim_seed)
                                    : harness.classify_positive(j.candidate, j.anchor);
    } catch (const std::exception& e) {
      errors[static_cast<size_t>(i)] = e.what();
    }
  }
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) {
      throw Error(ErrorCode::kSourceFailure, "job " + std::to_string(i) + ": " + errors[i]);
    }
  }
  return out;
}

bool retain_negative(const Verdict& v) {
  return v.status == Status::kCompileFail || v.status == Status::kFuncMismatch;
}

bool retain_positive(const Verdict& v) { return v.status == Status::kEquivalent; }

std::string verdict_json_line(const std::string& candidate, std::string_view mode,
                              const Verdict& v, const std::string& log_path) {
  nlohmann::ordered_json j;
  j["candidate"] = candidate;
  j["mode"] = mode;
  j["status"] = status_name(v.status);
  j["runs"] = v.runs;
  j["log_path"] = log_path;
  return j.dump();
}

}  // namespace forge::validation
