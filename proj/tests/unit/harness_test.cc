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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/stat.h>

#include "forge/mutation/mutation.h"
#include "forge/positive/transforms.h"
#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/process.h"
#include "forge/verilog/parser.h"
#include "support/corpus.h"

namespace forge::validation {
namespace {

using forge::testing::corpus_source;

std::string mutant_containing(const std::string& anchor, const std::string& rule,
                              const std::string& needle) {
  const auto unit = verilog::parse(anchor);
  for (const auto& m : mutation::mutate(unit, mutation::find_rule(rule), 0, 100)) {
    if (m.source.find(needle) != std::string::npos) return m.source;
  }
  ADD_FAILURE() << "no " << rule << " mutant containing " << needle;
  return anchor;
}

ToolConfig internal_config() {
  ToolConfig cfg = ToolConfig::defaults();
  cfg.backend = Backend::kInternal;
  return cfg;
}

// Writes executable shell scripts standing in for the EDA tools.
class FakeTools {
 public:
  std::string script(const std::string& name, const std::string& body) {
    const auto path = dir_.path() / name;
    write_file(path, "#!/bin/sh\n" + body + "\n");
    chmod(path.c_str(), 0755);
    return path.string();
  }

 private:
  ScratchDir dir_{"forge-fake-tools"};
};

verilog::Module module_of(const std::string& source) {
  auto unit = verilog::parse(source);
  EXPECT_FALSE(unit.has_errors());
  return unit.modules.at(0);
}

TEST(StimulusTest, CombinationalIsExhaustiveWhenSmall) {
  const Stimulus st = make_stimulus(module_of(corpus_source("half_adder")), 1);
  EXPECT_FALSE(st.clocking.sequential());
  ASSERT_EQ(st.vectors.size(), 4u);
  std::set<std::vector<uint64_t>> seen(st.vectors.begin(), st.vectors.end());
  EXPECT_EQ(seen.size(), 4u);
}

TEST(StimulusTest, WideCombinationalIsSampled) {
  const auto m = module_of(corpus_source("comparator"));
  EXPECT_EQ(make_stimulus(m, 7).vectors.size(), 256u);  // 8 input bits, exhaustive
  StimulusPolicy policy;
  policy.comb_vectors = 64;
  const Stimulus a = make_stimulus(m, 7, policy);
  const Stimulus b = make_stimulus(m, 7, policy);
  const Stimulus c = make_stimulus(m, 8, policy);
  EXPECT_EQ(a.vectors.size(), 64u);
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_NE(a.vectors, c.vectors);
  for (const auto& v : a.vectors) {
    for (uint64_t x : v) EXPECT_LT(x, 16u);
  }
}

TEST(StimulusTest, SequentialHasOneResetPulse) {
  const Stimulus st = make_stimulus(module_of(corpus_source("counter")), 3);
  ASSERT_TRUE(st.clocking.sequential());
  EXPECT_EQ(st.vectors.size(), 512u);
  size_t rst = st.inputs.size();
  for (size_t i = 0; i < st.inputs.size(); ++i) {
    EXPECT_NE(st.inputs[i].name, "clk");
    if (st.inputs[i].name == "rst") rst = i;
  }
  ASSERT_LT(rst, st.inputs.size());
  for (size_t c = 0; c < st.vectors.size(); ++c) {
    EXPECT_EQ(st.vectors[c][rst], c < 2 ? 1u : 0u) << "cycle " << c;
  }
}

TEST(SimCheckTest, HalfAdderOrMutantMismatchesOnlyAtOneOne) {
  const std::string anchor = corpus_source("half_adder");
  const std::string mutant = mutant_containing(anchor, "O3", "sum = a | b");
  // Hand-simulation oracle over all four input pairs.
  int differing = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) differing += ((a ^ b) != (a | b));
  }
  EXPECT_EQ(differing, 1);
  const auto am = module_of(anchor);
  const auto mm = module_of(mutant);
  const auto mismatch = compare_outputs(am, mm, make_stimulus(am, 0));
  ASSERT_TRUE(mismatch.has_value());
  EXPECT_EQ(mismatch->output, "sum");
  EXPECT_EQ(mismatch->expected, 0u);
  EXPECT_EQ(mismatch->actual, 1u);
  EXPECT_EQ(prove_equivalent(am, mm).outcome, ProofOutcome::kMismatch);
}

TEST(SimCheckTest, SequentialProofOverReachableStates) {
  const std::string anchor = corpus_source("counter");
  std::string swapped = anchor;
  swapped.replace(swapped.find("count + 1'b1"), 12, "1'b1 + count");
  EXPECT_EQ(prove_equivalent(module_of(anchor), module_of(swapped)).outcome,
            ProofOutcome::kEquivalent);

  std::string broken = anchor;
  broken.replace(broken.find("else if (en)"), 12, "else");
  const auto r = prove_equivalent(module_of(anchor), module_of(broken));
  EXPECT_EQ(r.outcome, ProofOutcome::kMismatch) << r.detail;
  const auto am = module_of(anchor);
  EXPECT_TRUE(compare_outputs(am, module_of(broken), make_stimulus(am, 5)).has_value());
}

TEST(SimCheckTest, ProofGivesUpBeyondInputBound) {
  const auto m = module_of(corpus_source("comparator"));
  ProofLimits limits;
  limits.exhaustive_input_bits = 4;
  EXPECT_EQ(prove_equivalent(m, m, limits).outcome, ProofOutcome::kUnknown);
  EXPECT_EQ(prove_equivalent(m, m).outcome, ProofOutcome::kEquivalent);
}

TEST(SimCheckTest, PortMismatchIsReported) {
  const auto a = module_of(corpus_source("half_adder"));
  const auto b = module_of(
      "module half_adder(input a, input c, output sum, output carry);\n"
      "  assign sum = a ^ c;\n  assign carry = a & c;\nendmodule\n");
  try {
    compare_outputs(a, b, make_stimulus(a, 0));
    FAIL() << "expected PortMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPortMismatch);
  }
}

TEST(SimCheckTest, TestbenchInstantiatesBothDesigns) {
  const auto m = module_of(corpus_source("counter"));
  const Stimulus st = make_stimulus(m, 0);
  const std::string tb = make_testbench(m, st, "g", "h");
  EXPECT_NE(tb.find("g u_gold_(.clk(clk)"), std::string::npos);
  EXPECT_NE(tb.find("h u_gate_(.clk(clk)"), std::string::npos);
  EXPECT_NE(tb.find("$display(\"DONE"), std::string::npos);
  EXPECT_NE(tb.find("MISMATCH"), std::string::npos);
}

TEST(SimCheckTest, EveryAnchorAgreesWithItself) {
  for (const auto& name : forge::testing::corpus_names()) {
    const auto m = module_of(corpus_source(name));
    EXPECT_FALSE(compare_outputs(m, m, make_stimulus(m, 9)).has_value()) << name;
  }
}

TEST(HarnessTest, StatusNamesRoundTrip) {
  for (Status s : {Status::kCompileFail, Status::kFuncMismatch, Status::kEquivalent,
                   Status::kIndeterminate}) {
    EXPECT_EQ(parse_status(status_name(s)), s);
  }
  EXPECT_THROW(parse_status("Maybe"), Error);
}

TEST(HarnessTest, RetentionRulesAreDisjoint) {
  for (Status s : {Status::kCompileFail, Status::kFuncMismatch, Status::kEquivalent,
                   Status::kIndeterminate}) {
    Verdict v;
    v.status = s;
    EXPECT_FALSE(retain_negative(v) && retain_positive(v));
    EXPECT_EQ(retain_negative(v), s == Status::kCompileFail || s == Status::kFuncMismatch);
    EXPECT_EQ(retain_positive(v), s == Status::kEquivalent);
  }
}

TEST(HarnessTest, ConfigRequiresDesignPlaceholder) {
  ToolConfig cfg = ToolConfig::defaults();
  EXPECT_NO_THROW(cfg.validate());
  cfg.compile_cmd = "yosys -p 'read_verilog x.v'";
  try {
    cfg.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(HarnessTest, ConfigFromToml) {
  const KvConfig kv = KvConfig::parse(
      "[tools]\ncompile_cmd = \"cc {design}\"\ntimeout = 5\nrepeat = 3\n"
      "backend = \"internal\"\njobs = 2\n");
  const ToolConfig cfg = ToolConfig::from_config(kv);
  EXPECT_EQ(cfg.compile_cmd, "cc {design}");
  EXPECT_EQ(cfg.timeout, 5.0);
  EXPECT_EQ(cfg.repeat, 3);
  EXPECT_EQ(cfg.jobs, 2);
  EXPECT_EQ(cfg.backend, Backend::kInternal);
  EXPECT_EQ(cfg.sim_cmd, ToolConfig::defaults().sim_cmd);
}

TEST(HarnessTest, RenameTopReplacesHeaderOnly) {
  const std::string src = "// module x\nmodule half_adder (input a);\nendmodule\n";
  EXPECT_EQ(rename_top(src, "g"), "// module x\nmodule g (input a);\nendmodule\n");
  EXPECT_EQ(command_program("  yosys -q -p x"), "yosys");
}

TEST(HarnessTest, InternalBackendVerdicts) {
  const Harness h(internal_config());
  const std::string anchor = corpus_source("half_adder");
  const std::string p1 = mutant_containing(anchor, "P1", "a ^ b\n");
  EXPECT_EQ(h.check_compile(p1).status, Status::kCompileFail);
  EXPECT_TRUE(h.check_compile(anchor).compiled);
  const std::string o3 = mutant_containing(anchor, "O3", "sum = a | b");
  const Verdict c = h.check_compile(o3);
  EXPECT_TRUE(c.compiled);
  EXPECT_EQ(c.status, Status::kIndeterminate);
  EXPECT_EQ(h.check_functional(o3, anchor, 0).status, Status::kFuncMismatch);
  EXPECT_EQ(h.check_functional(anchor, anchor, 0).status, Status::kEquivalent);
  EXPECT_EQ(h.classify_negative(o3, anchor, 0).status, Status::kFuncMismatch);
  EXPECT_EQ(h.classify_negative(p1, anchor, 0).status, Status::kCompileFail);
  EXPECT_EQ(h.check_equivalent(anchor, anchor).status, Status::kEquivalent);
}

TEST(HarnessTest, PositivesAreEquivalent) {
  const Harness h(internal_config());
  for (const auto& name : {"full_adder", "traffic_light_controller", "counter"}) {
    const std::string anchor = corpus_source(name);
    const auto unit = verilog::parse(anchor);
    for (const auto& p : positive::generate_positives(unit, 3, 1, positive::all_transforms())) {
      EXPECT_EQ(h.check_functional(p.source, anchor, 2).status, Status::kEquivalent) << name;
      const Verdict v = h.classify_positive(p.source, anchor);
      EXPECT_EQ(v.status, Status::kEquivalent) << name << "\n" << v.tool_log;
    }
  }
  const std::string fa = corpus_source("full_adder");
  const auto dm = positive::transform(verilog::parse(fa), positive::TransformId::kDeMorgan, 0);
  EXPECT_EQ(h.check_equivalent(dm.source, fa).status, Status::kEquivalent);
}

TEST(HarnessTest, LogicalOperatorSwapIsNotEquivalent) {
  const std::string anchor = corpus_source("comparator");
  const std::string o2 = mutant_containing(anchor, "O2", "||");
  // Truth-table oracle: lt = a < b against the mutated expression.
  int differing = 0;
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) differing += (a < b) != (!(a > b) || (a != b));
  }
  ASSERT_GT(differing, 0);
  const Harness h(internal_config());
  const Verdict v = h.check_equivalent(o2, anchor);
  EXPECT_NE(v.status, Status::kEquivalent);
  EXPECT_EQ(v.status, Status::kFuncMismatch);
}

TEST(HarnessTest, AnchorMustPassFrontend) {
  const Harness h(internal_config());
  try {
    h.check_functional(corpus_source("half_adder"), "module broken(", 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAnchorInvalid);
  }
}

TEST(HarnessTest, FakeCompilerRuns) {
  FakeTools tools;
  ToolConfig cfg = ToolConfig::defaults();
  cfg.backend = Backend::kExternal;
  const std::string anchor = corpus_source("half_adder");

  cfg.compile_cmd = tools.script("ok.sh", "test -f \"$1\"") + " {design}";
  Verdict v = Harness(cfg).check_compile(anchor);
  EXPECT_TRUE(v.compiled);
  EXPECT_EQ(v.runs, 2);
  EXPECT_EQ(v.backend, "external");

  cfg.compile_cmd = tools.script("bad.sh", "echo syntax error; exit 1") + " {design}";
  v = Harness(cfg).check_compile(anchor);
  EXPECT_EQ(v.status, Status::kCompileFail);
  EXPECT_NE(v.tool_log.find("syntax error"), std::string::npos);

  // Fails on the first run, passes on the second.
  cfg.compile_cmd =
      tools.script("flaky.sh", "if [ -f seen ]; then exit 0; fi; touch seen; exit 1") +
      " {design}";
  v = Harness(cfg).check_compile(anchor);
  EXPECT_EQ(v.status, Status::kIndeterminate);
  EXPECT_FALSE(v.compiled);

  cfg.compile_cmd = tools.script("slow.sh", "sleep 5") + " {design}";
  cfg.timeout = 0.2;
  cfg.repeat = 1;
  v = Harness(cfg).check_compile(anchor);
  EXPECT_EQ(v.status, Status::kIndeterminate);
  EXPECT_NE(v.tool_log.find("timed out"), std::string::npos);
}

TEST(HarnessTest, FakeSimulatorOutputIsParsed) {
  FakeTools tools;
  ToolConfig cfg = ToolConfig::defaults();
  cfg.backend = Backend::kExternal;
  const std::string anchor = corpus_source("half_adder");
  cfg.sim_cmd = tools.script("mm.sh", "echo 'MISMATCH step=3 sum 0 1'; echo DONE errors=1") +
                " {tb} {design}";
  EXPECT_EQ(Harness(cfg).check_functional(anchor, anchor, 0).status, Status::kFuncMismatch);
  cfg.sim_cmd = tools.script("agree.sh", "grep -q forge_gate \"$1\" && echo DONE errors=0") +
                " {tb} {design}";
  EXPECT_EQ(Harness(cfg).check_functional(anchor, anchor, 0).status, Status::kEquivalent);
  cfg.sim_cmd = tools.script("crash.sh", "exit 3") + " {tb} {design}";
  EXPECT_EQ(Harness(cfg).check_functional(anchor, anchor, 0).status, Status::kIndeterminate);
}

TEST(HarnessTest, FailedExternalProofNeedsCounterexample) {
  FakeTools tools;
  ToolConfig cfg = ToolConfig::defaults();
  cfg.backend = Backend::kExternal;
  cfg.equiv_cmd = tools.script("noproof.sh", "exit 1") + " {design} {anchor} {top}";
  const Harness h(cfg);
  const std::string anchor = corpus_source("half_adder");
  EXPECT_EQ(h.check_equivalent(anchor, anchor).status, Status::kIndeterminate);
  const std::string o3 = mutant_containing(anchor, "O3", "sum = a | b");
  EXPECT_EQ(h.check_equivalent(o3, anchor).status, Status::kFuncMismatch);
}

TEST(HarnessTest, MissingToolIsUnavailableOnlyWhenForced) {
  ToolConfig cfg = ToolConfig::defaults();
  cfg.compile_cmd = "forge-no-such-compiler {design}";
  cfg.backend = Backend::kExternal;
  try {
    Harness(cfg).check_compile(corpus_source("half_adder"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kToolUnavailable);
  }
  cfg.backend = Backend::kAuto;
  const Verdict v = Harness(cfg).check_compile(corpus_source("half_adder"));
  EXPECT_TRUE(v.compiled);
  EXPECT_EQ(v.backend, "internal");
}

TEST(HarnessTest, BatchKeepsJobOrder) {
  ToolConfig cfg = internal_config();
  cfg.jobs = 3;
  const Harness h(cfg);
  const std::string anchor = corpus_source("half_adder");
  const std::string o3 = mutant_containing(anchor, "O3", "sum = a | b");
  std::vector<Job> jobs;
  for (int i = 0; i < 6; ++i) {
    jobs.push_back({i % 2 ? o3 : anchor, anchor, i % 2 ? Role::kNegative : Role::kPositive, 0});
  }
  const auto verdicts = classify_batch(h, jobs);
  for (size_t i = 0; i < jobs.size(); ++i) {
    EXPECT_EQ(verdicts[i].status, i % 2 ? Status::kFuncMismatch : Status::kEquivalent);
  }
}

TEST(HarnessTest, VerdictJsonLine) {
  Verdict v;
  v.status = Status::kCompileFail;
  v.runs = 2;
  const auto j = nlohmann::json::parse(verdict_json_line("m.v", "compile", v, "logs/m.log"));
  EXPECT_EQ(j["candidate"], "m.v");
  EXPECT_EQ(j["mode"], "compile");
  EXPECT_EQ(j["status"], "CompileFail");
  EXPECT_EQ(j["runs"], 2);
  EXPECT_EQ(j["log_path"], "logs/m.log");
}

// The tests below drive the real yosys flow and skip when it is absent.
bool have_yosys() {
  return find_executable(command_program(ToolConfig::defaults().compile_cmd)).has_value();
}

TEST(YosysTest, CompileVerdicts) {
  if (!have_yosys()) GTEST_SKIP() << "yosys not on PATH";
  ToolConfig cfg = ToolConfig::defaults();
  cfg.backend = Backend::kExternal;
  const Harness h(cfg);
  const std::string anchor = corpus_source("half_adder");
  EXPECT_EQ(h.check_compile(mutant_containing(anchor, "P1", "a ^ b\n")).status,
            Status::kCompileFail);
  EXPECT_TRUE(h.check_compile(anchor).compiled);
  EXPECT_TRUE(h.check_compile(mutant_containing(anchor, "O3", "sum = a | b")).compiled);
}

TEST(YosysTest, EquivalenceVerdicts) {
  if (!have_yosys()) GTEST_SKIP() << "yosys not on PATH";
  ToolConfig cfg = ToolConfig::defaults();
  cfg.backend = Backend::kExternal;
  const Harness h(cfg);
  const std::string fa = corpus_source("full_adder");
  const auto dm = positive::transform(verilog::parse(fa), positive::TransformId::kDeMorgan, 0);
  Verdict v = h.check_equivalent(dm.source, fa);
  EXPECT_EQ(v.status, Status::kEquivalent) << v.tool_log;
  EXPECT_EQ(h.check_equivalent(fa, fa).status, Status::kEquivalent);
  const std::string cmp = corpus_source("comparator");
  v = h.check_equivalent(mutant_containing(cmp, "O2", "||"), cmp);
  EXPECT_EQ(v.status, Status::kFuncMismatch) << v.tool_log;
}

TEST(IcarusTest, ExternalSimulationVerdicts) {
  if (!find_executable("iverilog") || !find_executable("vvp")) {
    GTEST_SKIP() << "iverilog/vvp not on PATH";
  }
  ToolConfig cfg = ToolConfig::defaults();
  cfg.backend = Backend::kExternal;
  const Harness h(cfg);
  const std::string anchor = corpus_source("counter");
  EXPECT_EQ(h.check_functional(anchor, anchor, 1).status, Status::kEquivalent);
  std::string broken = anchor;
  broken.replace(broken.find("else if (en)"), 12, "else");
  EXPECT_EQ(h.check_functional(broken, anchor, 1).status, Status::kFuncMismatch);
}

}  // namespace
}  // namespace forge::validation
