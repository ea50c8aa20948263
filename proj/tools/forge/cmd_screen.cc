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


#include <cstdlib>
#include <iostream>
#include <sstream>

#include "forge/classifier/classifier.h"
#include "forge/eval/metrics.h"
#include "forge/pipeline/pipeline.h"
#include "forge/screening/bridge.h"
#include "forge/screening/decoder.h"
#include "forge/util/error.h"
#include "forge/util/io.h"
#include "tools/forge/common.h"

namespace forge::cli {

namespace fs = std::filesystem;

namespace {

void add_screen(CLI::App& app, Globals& g) {
  auto* top = app.add_subcommand("screen", "Screened decoding");
  top->require_subcommand(1);
  auto* cmd = top->add_subcommand("run", "Decode with boundary-level validity screening");
  struct Opts {
    std::string source;
    std::string bridge_cmd;
    double bridge_timeout = 120.0;
    std::string model;
    bool oracle = false;
    std::string prompt;
    std::string prompt_file;
    std::string out;
    std::string trace_out;
    std::string stat_scope = "segment";
    screening::ScreeningConfig cfg;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--source", o->source, "bridge, replay:<trace.jsonl> or script:<spec>")->required();
  cmd->add_option("--bridge-cmd", o->bridge_cmd, "Command serving the bridge protocol (default: $FORGE_BRIDGE)");
  cmd->add_option("--bridge-timeout", o->bridge_timeout, "Seconds to wait for each bridge reply");
  cmd->add_option("--model", o->model, "Classifier (model.bin); omit to decode unscreened")->check(CLI::ExistingFile);
  cmd->add_flag("--oracle", o->oracle, "Gate scripted sources with their own bad-segment rule");
  cmd->add_option("--prompt", o->prompt, "Prompt text");
  cmd->add_option("--prompt-file", o->prompt_file, "Read the prompt from a file")->check(CLI::ExistingFile);
  cmd->add_option("--tau", o->cfg.tau, "Acceptance threshold");
  cmd->add_option("--max-tokens", o->cfg.max_tokens, "Token budget per decoding path");
  cmd->add_option("--temperature", o->cfg.temperature, "Sampling temperature");
  cmd->add_option("--top-p", o->cfg.top_p, "Nucleus sampling mass");
  cmd->add_option("--seed", o->cfg.seed, "Seed");
  cmd->add_option("--stat-scope", o->stat_scope, "segment or full")->check(CLI::IsMember({"segment", "full"}));
  cmd->add_option("--out", o->out, "Write the generated text here");
  cmd->add_option("--trace-out", o->trace_out, "Write the token trace here");
  cmd->callback([o, &g] {
    if (!o->model.empty() && o->oracle) usage("--model and --oracle are exclusive");
    screening::ScreeningConfig cfg = o->cfg;
    cfg.stat_scope = o->stat_scope == "full" ? screening::StatScope::kFull : screening::StatScope::kSegment;
    std::string prompt = o->prompt;
    if (!o->prompt_file.empty()) prompt = read_file(o->prompt_file);

    std::unique_ptr<screening::TokenSource> source;
    bool scripted = false;
    if (o->source == "bridge") {
      std::string command = o->bridge_cmd;
      if (command.empty()) {
        if (const char* env = std::getenv("FORGE_BRIDGE")) command = env;
      }
      if (command.empty()) {
        throw Error(ErrorCode::kToolUnavailable, "no bridge command (use --bridge-cmd or FORGE_BRIDGE)");
      }
      source = std::make_unique<screening::BridgeSource>(
          std::make_unique<screening::ProcessChannel>(command, o->bridge_timeout), "bridge:" + command);
    } else if (o->source.rfind("replay:", 0) == 0) {
      trace::TokenTrace t = trace::read_trace(o->source.substr(7));
      if (o->prompt.empty() && o->prompt_file.empty()) prompt = t.header.prompt;
      source = std::make_unique<screening::ReplaySource>(std::move(t));
    } else if (o->source.rfind("script:", 0) == 0) {
      source = std::make_unique<screening::ScriptedSource>(screening::ScriptSpec::parse(o->source.substr(7)));
      scripted = true;
    } else {
      usage("--source must be bridge, replay:<trace> or script:<spec>");
    }
    if (o->oracle && !scripted) usage("--oracle needs a script: source");

    std::unique_ptr<screening::Gate> gate;
    if (!o->model.empty()) {
      gate = std::make_unique<screening::ModelGate>(classifier::load_model(o->model));
    } else if (o->oracle) {
      gate = std::make_unique<screening::OracleGate>(screening::ScriptedSource::is_bad_segment);
    }
    const auto r = screening::generate(prompt, *source, gate.get(), cfg);
    if (!o->out.empty()) write_file(o->out, r.text);
    if (!o->trace_out.empty()) {
      trace::TokenTrace t = r.trace;
      t.header.hidden_file = fs::path(o->trace_out).stem().string() + ".bin";
      trace::write_trace(o->trace_out, t);
    }
    size_t rejects = 0, forced = 0;
    for (const auto& e : r.step_log) {
      rejects += e.decision == screening::Decision::kReject;
      forced += e.decision == screening::Decision::kForceAccept;
    }
    ordered_json j;
    j["complete"] = r.complete;
    j["decoded_tokens"] = r.decoded_tokens;
    j["boundaries"] = r.step_log.empty() ? 0 : r.step_log.back().boundary_index + 1;
    j["rejected"] = rejects;
    j["force_accepted"] = forced;
    j["step_log"] = ordered_json::parse(screening::step_log_json(r.step_log));
    if (o->out.empty()) j["text"] = r.text;
    std::ostringstream text;
    if (o->out.empty()) text << r.text << (r.text.empty() || r.text.back() == '\n' ? "" : "\n");
    text << "-- " << (r.complete ? "complete" : "token budget exhausted") << ", "
         << r.decoded_tokens << " tokens decoded, " << rejects << " rejection(s), " << forced
         << " force-accept(s)\n";
    emit(g, j, text.str());
  });
}

std::vector<int> parse_ks(const std::string& text) {
  std::vector<int> ks;
  for (const std::string& s : split_list(text)) {
    try {
      size_t used = 0;
      const int k = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      ks.push_back(k);
    } catch (const std::exception&) {
      usage("bad k value '" + s + "'");
    }
  }
  if (ks.empty()) usage("no k values");
  return ks;
}

void add_metrics(CLI::App& app, Globals& g) {
  auto* top = app.add_subcommand("metrics", "Evaluation metrics");
  top->require_subcommand(1);

  auto* pk = top->add_subcommand("passk", "Mean pass@k over problems");
  struct PassOpts {
    std::string results;
    std::string k = "1,5,10";
    std::string csv;
  };
  auto p = std::make_shared<PassOpts>();
  pk->add_option("--results", p->results, "results.jsonl")->required()->check(CLI::ExistingFile);
  pk->add_option("--k", p->k, "Comma-separated k values");
  pk->add_option("--csv", p->csv, "Also write the per-problem CSV here");
  pk->callback([p, &g] {
    const auto report = eval::aggregate(eval::read_results(p->results), parse_ks(p->k));
    const std::string csv = eval::report_csv(report);
    if (!p->csv.empty()) write_file(p->csv, csv);
    if (g.json) {
      std::cout << eval::report_json(report);
    } else {
      std::cout << csv;
    }
  });

  auto* sr = top->add_subcommand("success", "Compile or functional success rate");
  struct SuccessOpts {
    std::string results;
    std::string criterion = "compile";
  };
  auto s = std::make_shared<SuccessOpts>();
  sr->add_option("--results", s->results, "results.jsonl")->required()->check(CLI::ExistingFile);
  sr->add_option("--criterion", s->criterion, "compile or functional")
      ->check(CLI::IsMember({"compile", "functional"}));
  sr->callback([s, &g] {
    const auto results = eval::read_results(s->results);
    const double rate = eval::success_rate(results, eval::parse_criterion(s->criterion));
    size_t total = 0;
    for (const auto& r : results) total += r.verdicts.size();
    ordered_json j;
    j["criterion"] = s->criterion;
    j["rate_percent"] = rate;
    j["candidates"] = total;
    std::ostringstream text;
    text.precision(4);
    text << s->criterion << " success: " << rate << "% of " << total << " candidates\n";
    emit(g, j, text.str());
  });

  auto* sc = top->add_subcommand(
      "score", "Validate generated samples against reference designs and write results.jsonl");
  struct ScoreOpts {
    std::string problems;
    std::string out;
    std::string config;
    uint64_t seed = 0;
  };
  auto c = std::make_shared<ScoreOpts>();
  sc->add_option("--problems", c->problems,
                 "Directory with one sub-directory per problem: reference.v and samples/*.v")
      ->required()
      ->check(CLI::ExistingDirectory);
  sc->add_option("--out", c->out, "results.jsonl")->required();
  sc->add_option("--config", c->config, "tools.toml (default: $FORGE_TOOLS)");
  sc->add_option("--seed", c->seed, "Stimulus seed");
  sc->callback([c, &g] {
    const validation::Harness harness(load_tools(c->config));
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(c->problems)) {
      if (e.is_directory()) dirs.push_back(e.path());
    }
    std::sort(dirs.begin(), dirs.end());
    std::vector<eval::ProblemResult> results;
    for (const fs::path& dir : dirs) {
      if (!fs::exists(dir / "reference.v")) {
        throw Error(ErrorCode::kIo, dir.string() + " has no reference.v");
      }
      std::vector<fs::path> files;
      if (fs::is_directory(dir / "samples")) {
        for (const auto& e : fs::directory_iterator(dir / "samples")) {
          if (e.path().extension() == ".v") files.push_back(e.path());
        }
      }
      std::sort(files.begin(), files.end());
      std::vector<std::string> samples;
      for (const auto& f : files) samples.push_back(read_file(f));
      results.push_back(eval::score_candidates(harness, dir.filename().string(), samples,
                                               read_file(dir / "reference.v"), c->seed));
    }
    if (results.empty()) throw Error(ErrorCode::kEmptyInput, c->problems + " holds no problems");
    eval::write_results(c->out, results);
    ordered_json j = ordered_json::array();
    std::ostringstream text;
    for (const auto& r : results) {
      j.push_back({{"problem_id", r.problem_id}, {"n", r.n()}, {"c", r.c()}});
      text << r.problem_id << "  n=" << r.n() << " c=" << r.c() << "\n";
    }
    text << "results written to " << c->out << "\n";
    emit(g, j, text.str());
  });
}

void add_pipeline(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("pipeline", "Run the staged pipeline with up-to-date checks");
  struct Opts {
    std::string config;
    std::string stages;
    std::string corpus;
    std::string out;
    std::string tools;
    uint64_t seed = 0;
    std::vector<std::string> sets;
  };
  auto o = std::make_shared<Opts>();
  auto* seed_opt = cmd->add_option("--seed", o->seed, "Seed");
  cmd->add_option("--config", o->config, "Pipeline TOML file")->check(CLI::ExistingFile);
  cmd->add_option("--stages", o->stages, "Comma list of dataset, features, clf, sweep, report or all");
  cmd->add_option("--corpus", o->corpus, "Corpus directory");
  cmd->add_option("--out", o->out, "Output directory");
  cmd->add_option("--tools", o->tools, "tools.toml (default: $FORGE_TOOLS)");
  cmd->add_option("--set", o->sets, "Parameter override, e.g. clf.epochs=20");
  cmd->callback([o, seed_opt, &g] {
    pipeline::PipelineConfig cfg;
    if (!o->config.empty()) cfg = pipeline::PipelineConfig::load(o->config);
    if (!o->stages.empty()) cfg.stages = split_list(o->stages);
    if (!o->corpus.empty()) cfg.corpus_dir = o->corpus;
    if (!o->out.empty()) cfg.out_dir = o->out;
    if (seed_opt->count()) cfg.seed = o->seed;
    const fs::path tools = tools_path(o->tools);
    if (!tools.empty()) cfg.tools_config = tools;
    if (cfg.corpus_dir.empty()) cfg.corpus_dir = "corpus";
    if (cfg.out_dir.empty()) cfg.out_dir = "forge-out";
    for (const std::string& kv : o->sets) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos) usage("--set expects key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      try {
        const KvConfig parsed = KvConfig::parse(key + " = " + kv.substr(eq + 1));
        for (const auto& [k, value] : parsed.values()) cfg.overrides.set(k, value);
      } catch (const Error&) {
        cfg.overrides.set(key, kv.substr(eq + 1));  // bare word: a string
      }
    }
    const auto result = pipeline::run_pipeline(cfg, g.json ? nullptr : &std::cout);
    if (g.json) {
      ordered_json j;
      j["manifest"] = result.manifest.string();
      j["stages"] = ordered_json::array();
      for (const auto& s : result.stages) {
        j["stages"].push_back({{"name", s.name},
                               {"status", s.ran ? "ran" : "up-to-date"},
                               {"seconds", s.seconds},
                               {"summary", s.summary}});
      }
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "manifest: " << result.manifest.string() << "\n";
    }
  });
}

}  // namespace

void add_screen_commands(CLI::App& app, Globals& g) {
  add_screen(app, g);
  add_metrics(app, g);
  add_pipeline(app, g);
}

}  // namespace forge::cli
