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


#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>

#include "forge/eval/metrics.h"
#include "forge/util/io.h"
#include "forge/util/process.h"
#include "support/corpus.h"

namespace forge {
namespace {

namespace fs = std::filesystem;

std::string corpus(const std::string& name) {
  return (forge::testing::corpus_dir() / (name + ".v")).string();
}

class CliTest : public ::testing::Test {
 protected:
  ProcessResult forge(const std::string& args, const std::string& env = "") {
    return run_command(env + " " + std::string(FORGE_CLI) + " " + args, dir_.path(), 120.0);
  }
  nlohmann::json json(const std::string& args) {
    const ProcessResult r = forge("--json " + args + " 2>/dev/null");
    EXPECT_EQ(r.exit_code, 0) << args << "\n" << r.output;
    return nlohmann::json::parse(r.output);
  }
  fs::path path(const std::string& rel) const { return dir_.path() / rel; }

  ScratchDir dir_{"forge-cli-test"};
};

TEST_F(CliTest, HelpForEverySubcommand) {
  for (const char* cmd :
       {"", "parse", "mutate", "positives", "validate", "dataset build", "features extract",
        "features score", "clf train", "clf sweep", "report pca", "screen run", "metrics passk",
        "metrics success", "metrics score", "pipeline"}) {
    const ProcessResult r = forge(std::string(cmd) + " --help");
    EXPECT_EQ(r.exit_code, 0) << cmd;
    EXPECT_NE(r.output.find("Usage:"), std::string::npos) << cmd;
  }
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(forge("").exit_code, 1);
  EXPECT_EQ(forge("parse").exit_code, 1);
  EXPECT_EQ(forge("validate " + corpus("mux") + " --mode simulate").exit_code, 1);
  EXPECT_EQ(forge("validate " + corpus("mux") + " --mode func").exit_code, 1);
  EXPECT_EQ(forge("mutate " + corpus("mux") + " --rule Z9 --out m").exit_code, 1);
  EXPECT_EQ(forge("screen run --source nowhere").exit_code, 1);
}

TEST_F(CliTest, ParseExitCodeFollowsErrors) {
  EXPECT_EQ(forge("parse " + corpus("counter")).exit_code, 0);
  write_file(path("bad.v"), "module m(input a, output y);\n  assign y = a\nendmodule\n");
  const ProcessResult r = forge("parse bad.v");
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.output.find("bad.v:3:1: error:"), std::string::npos) << r.output;
  const ProcessResult dumped = forge("--json parse bad.v --dump-tokens --dump-ast");
  EXPECT_EQ(dumped.exit_code, 2);
  const auto j = nlohmann::json::parse(dumped.output);
  EXPECT_EQ(j["errors"], 1);
  EXPECT_EQ(j["tokens"][0]["text"], "module");
  EXPECT_EQ(j["diagnostics"][0]["line"], 3);
}

TEST_F(CliTest, MutantsAndSidecars) {
  const auto j = json("mutate " + corpus("half_adder") + " --rule operator --seed 4 --max 3 --out m");
  ASSERT_EQ(j.size(), 3u);
  for (const auto& m : j) {
    const fs::path v = m["file"].get<std::string>();
    EXPECT_TRUE(fs::exists(path(v.string())));
    const std::string name = v.filename().string();
    EXPECT_EQ(name.rfind("half_adder__" + m["rule_id"].get<std::string>() + "__", 0), 0u) << name;
    fs::path meta = path(v.string());
    meta.replace_extension(".json");
    const auto side = nlohmann::json::parse(read_file(meta));
    for (const char* key : {"rule_id", "site_begin", "site_end", "original_text", "mutated_text", "seed"}) {
      EXPECT_TRUE(side.contains(key)) << key;
    }
  }
  EXPECT_EQ(json("mutate --list-rules").size(), 17u);
}

TEST_F(CliTest, PositivesAndValidation) {
  const auto p = json("positives " + corpus("mux") + " --seed 2 --count 2 --out p");
  ASSERT_FALSE(p.empty());
  const std::string file = p[0]["file"];
  write_file(path("t.toml"), "backend = \"internal\"\n");
  const ProcessResult r =
      forge("validate " + file + " --anchor " + corpus("mux") + " --mode equiv --log-dir logs",
            "FORGE_TOOLS=t.toml");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto line = nlohmann::json::parse(r.output);
  EXPECT_EQ(line["status"], "Equivalent");
  EXPECT_EQ(line["mode"], "equiv");
  EXPECT_TRUE(fs::exists(path(line["log_path"].get<std::string>())));
}

TEST_F(CliTest, MissingToolExitsThree) {
  write_file(path("bad.toml"), "backend = \"external\"\ncompile_cmd = \"forge-missing-cc {design}\"\n");
  const ProcessResult r = forge("validate " + corpus("mux"), "FORGE_TOOLS=bad.toml");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.output.find("forge-missing-cc"), std::string::npos);
  const ProcessResult p = forge("pipeline --corpus " + forge::testing::corpus_dir().string() +
                                    " --out out --stages all",
                                "FORGE_TOOLS=bad.toml");
  EXPECT_EQ(p.exit_code, 3);
  EXPECT_NE(p.output.find("validation-harness"), std::string::npos) << p.output;
  EXPECT_FALSE(fs::exists(path("out/features")));
}

TEST_F(CliTest, PipelineTwiceIsUpToDate) {
  const std::string args = "pipeline --corpus " + forge::testing::corpus_dir().string() +
                           " --out out --stages dataset,features,clf --seed 7"
                           " --set tools.backend=internal --set clf.epochs=2 --set clf.hidden=8";
  const auto first = json(args);
  for (const auto& s : first["stages"]) EXPECT_EQ(s["status"], "ran");
  const auto second = json(args);
  ASSERT_EQ(second["stages"].size(), 3u);
  for (const auto& s : second["stages"]) EXPECT_EQ(s["status"], "up-to-date");
  EXPECT_EQ(forge(args + " --set clf.nope=1").exit_code, 1);
}

TEST_F(CliTest, ScreenScriptAndReplay) {
  const std::string src = "--source script:statements=8,bad=0.5,dim=4 --seed 3";
  const auto plain = json("screen run " + src + " --trace-out t.jsonl");
  EXPECT_TRUE(plain["step_log"].empty());
  EXPECT_TRUE(fs::exists(path("t.bin")));
  const auto gated = json("screen run " + src + " --oracle --out o.v");
  EXPECT_FALSE(gated["step_log"].empty());
  EXPECT_NE(read_file(path("o.v")).find("endmodule"), std::string::npos);
  for (const auto& e : gated["step_log"]) {
    EXPECT_TRUE(e["decision"] == "accept" || e["decision"] == "reject" || e["decision"] == "force_accept");
  }
  const auto replay = json("screen run --source replay:t.jsonl");
  EXPECT_EQ(replay["text"], plain["text"]);
  EXPECT_EQ(forge("screen run --source script:statements=2 --oracle --model x.bin").exit_code, 1);
  EXPECT_EQ(forge("screen run --source bridge", "FORGE_BRIDGE=").exit_code, 3);
  const ProcessResult bridge =
      forge("--json screen run --source bridge --bridge-cmd '" + std::string(FAKE_BRIDGE) +
            " --spec statements=8,bad=0.5,dim=4' --seed 3");
  ASSERT_EQ(bridge.exit_code, 0) << bridge.output;
  EXPECT_EQ(nlohmann::json::parse(bridge.output)["text"], plain["text"]);
}

TEST_F(CliTest, Metrics) {
  eval::ProblemResult a{"a", {{true, true}, {true, false}, {false, false}, {true, true}}};
  eval::ProblemResult b{"b", {{true, false}, {false, false}, {true, false}, {true, false}}};
  eval::write_results(path("results.jsonl"), {a, b});
  const auto pk = json("metrics passk --results results.jsonl --k 1,2");
  EXPECT_DOUBLE_EQ(pk["mean"]["pass@1"].get<double>(), 0.25);
  EXPECT_DOUBLE_EQ(pk["mean"]["pass@2"].get<double>(), (1.0 - 1.0 / 6.0) / 2.0);
  const ProcessResult csv = forge("metrics passk --results results.jsonl --k 1");
  EXPECT_EQ(csv.output.substr(0, csv.output.find('\n')), "problem_id,n,c,compiled,pass@1");
  EXPECT_EQ(json("metrics success --results results.jsonl --criterion compile")["rate_percent"], 75.0);
  EXPECT_EQ(json("metrics success --results results.jsonl --criterion functional")["rate_percent"], 25.0);
  EXPECT_NE(forge("metrics passk --results results.jsonl --k 5").exit_code, 0);

  fs::create_directories(path("probs/ha/samples"));
  write_file(path("probs/ha/reference.v"), read_file(corpus("half_adder")));
  write_file(path("probs/ha/samples/0.v"), read_file(corpus("half_adder")));
  write_file(path("probs/ha/samples/1.v"), "module half_adder(input a);\n");
  write_file(path("t.toml"), "backend = \"internal\"\n");
  const auto scored = json("metrics score --problems probs --out r.jsonl --config t.toml");
  EXPECT_EQ(scored[0]["c"], 1);
  const auto back = eval::read_results(path("r.jsonl"));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].verdicts[1], (eval::CandidateVerdict{false, false}));
}

TEST_F(CliTest, FeaturesClassifierAndReport) {
  const std::string c = forge::testing::corpus_dir().string();
  json("features score " + corpus("mux") + " " + corpus("counter") + " " + corpus("rom") +
       " --corpus " + c + " --out ok --label 1 --dim 6");
  json("mutate " + corpus("mux") + " --rule P1 --max 2 --out m");
  json("mutate " + corpus("counter") + " --rule K1 --max 2 --out m");
  std::string bad;
  for (const auto& e : fs::directory_iterator(path("m"))) {
    if (e.path().extension() == ".v") bad += " " + e.path().string();
  }
  json("features score" + bad + " --corpus " + c + " --out err --label 0 --dim 6");
  std::string traces;
  for (const char* d : {"ok", "err"}) {
    for (const auto& e : fs::directory_iterator(path(d))) {
      if (e.path().extension() == ".jsonl") traces += " " + e.path().string();
    }
  }
  const auto ext = json("features extract --trace" + traces + " --out f.jsonl");
  EXPECT_EQ(ext["rows"], 7);
  EXPECT_EQ(ext["features"].size(), 14u);
  EXPECT_EQ(forge("features extract --trace ok/mux.jsonl err/x.jsonl --hidden ok/mux.bin --out g.jsonl")
                .exit_code,
            1);
  const auto tr = json("clf train --features f.jsonl --out m.bin --epochs 2 --hidden 8 --batch 2 "
                       "--split 0.5 --val-out val.jsonl --history h.csv");
  EXPECT_EQ(tr["input_dim"], 20);
  EXPECT_EQ(tr["history"].size(), 2u);
  const auto sw = json("clf sweep --model m.bin --features val.jsonl --out curve.csv");
  EXPECT_TRUE(sw.contains("best_tau"));
  const std::string curve = read_file(path("curve.csv"));
  EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 1002);
  const auto rep = json("report pca --ok ok/mux.bin --err ok/counter.bin --out rep");
  EXPECT_TRUE(rep.contains("separation_score"));
  EXPECT_TRUE(fs::exists(path("rep/pca.csv")));
}

}  // namespace
}  // namespace forge
