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


#include "forge/pipeline/pipeline.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

#include "forge/classifier/classifier.h"
#include "forge/dataset/dataset.h"
#include "forge/embedding/embedding.h"
#include "forge/features/feature_file.h"
#include "forge/trace/surrogate.h"
#include "forge/util/io.h"
#include "forge/util/rng.h"
#include "forge/validation/harness.h"

namespace forge::pipeline {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {"dataset", "features", "clf", "sweep", "report"};
  return names;
}

std::vector<std::string> resolve_stages(const std::vector<std::string>& requested) {
  std::set<std::string> want;
  for (const std::string& s : requested) {
    if (s == "all") {
      want.insert(stage_names().begin(), stage_names().end());
      continue;
    }
    if (std::find(stage_names().begin(), stage_names().end(), s) == stage_names().end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown stage '" + s + "' (expected dataset, features, clf, sweep, report or all)");
    }
    want.insert(s);
  }
  if (want.empty()) throw Error(ErrorCode::kInvalidArgument, "no stages requested");
  std::vector<std::string> out;
  for (const std::string& s : stage_names()) {
    if (want.count(s)) out.push_back(s);
  }
  return out;
}

std::string stage_component(const std::string& stage) {
  if (stage == "dataset") return "dataset-builder";
  if (stage == "features") return "uncertainty-features";
  if (stage == "clf" || stage == "sweep") return "screening-classifier";
  if (stage == "report") return "embedding-math";
  return "cli";
}

StageError::StageError(std::string stage, std::string component, const Error& cause)
    : Error(cause.code(), stage + ": [" + component + "] " + cause.what()),
      stage_(std::move(stage)),
      component_(std::move(component)) {}

std::string content_hash(const fs::path& path) {
  if (fs::is_regular_file(path)) return sha256_file(path);
  if (!fs::is_directory(path)) throw Error(ErrorCode::kIo, "missing " + path.string());
  std::vector<std::string> names;
  for (const auto& e : fs::recursive_directory_iterator(path)) {
    if (e.is_regular_file()) names.push_back(fs::relative(e.path(), path).generic_string());
  }
  std::sort(names.begin(), names.end());
  std::string listing;
  for (const std::string& n : names) listing += n + '\0' + sha256_file(path / n) + '\n';
  return sha256_hex(listing);
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  const KvConfig kv = KvConfig::load(path);
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  PipelineConfig cfg;
  for (const auto& [key, value] : kv.values()) {
    if (key.rfind("pipeline.", 0) == 0) continue;
    cfg.overrides.set(key, value);
  }
  if (auto v = kv.get_string("pipeline.corpus")) cfg.corpus_dir = resolve(*v);
  if (auto v = kv.get_string("pipeline.out")) cfg.out_dir = resolve(*v);
  if (auto v = kv.get_string("pipeline.tools")) cfg.tools_config = resolve(*v);
  if (auto v = kv.get_int("pipeline.seed")) {
    if (*v < 0) throw Error(ErrorCode::kSchema, "pipeline.seed must be non-negative");
    cfg.seed = static_cast<uint64_t>(*v);
  }
  if (auto v = kv.get_string("pipeline.stages")) cfg.stages = split_list(*v);
  for (const auto& [key, value] : kv.values()) {
    static const std::set<std::string> known = {"pipeline.corpus", "pipeline.out", "pipeline.tools",
                                                "pipeline.seed", "pipeline.stages"};
    if (key.rfind("pipeline.", 0) == 0 && !known.count(key)) {
      throw Error(ErrorCode::kSchema, "unknown pipeline key '" + key + "'");
    }
  }
  return cfg;
}

namespace {

const std::set<std::string>& known_overrides() {
  static const std::set<std::string> keys = {
      "dataset.positives", "dataset.negatives_per_family", "dataset.max_triplets_per_anchor",
      "dataset.anchor_jobs", "features.hidden_dim", "features.smoothing", "features.spike_sigmas",
      "features.low_confidence_prob", "features.last_k", "clf.learning_rate", "clf.batch_size",
      "clf.epochs", "clf.dropout", "clf.split", "clf.hidden", "clf.optimizer", "clf.momentum",
      "sweep.step", "tools.backend", "tools.compile_cmd", "tools.sim_cmd", "tools.equiv_cmd",
      "tools.timeout", "tools.repeat", "tools.jobs"};
  return keys;
}

struct Context {
  const PipelineConfig& cfg;
  fs::path out;
  validation::ToolConfig tools;

  int64_t integer(const std::string& key, int64_t def) const {
    const auto v = cfg.overrides.get_int(key);
    if (v && *v < 0) throw Error(ErrorCode::kInvalidArgument, key + " must be non-negative");
    return v.value_or(def);
  }
  double real(const std::string& key, double def) const {
    return cfg.overrides.get_double(key).value_or(def);
  }
  std::string text(const std::string& key, const std::string& def) const {
    return cfg.overrides.get_string(key).value_or(def);
  }
};

ordered_json tools_json(const validation::ToolConfig& t) {
  ordered_json j;
  j["backend"] = validation::backend_name(t.backend);
  j["compile_cmd"] = t.compile_cmd;
  j["sim_cmd"] = t.sim_cmd;
  j["equiv_cmd"] = t.equiv_cmd;
  j["timeout"] = t.timeout;
  j["repeat"] = t.repeat;
  j["comb_vectors"] = t.stimulus.comb_vectors;
  j["seq_cycles"] = t.stimulus.seq_cycles;
  j["exhaustive_input_bits"] = t.limits.exhaustive_input_bits;
  return j;
}

struct StageRun {
  std::string summary;
};

struct Stage {
  std::string name;
  ordered_json params;
  std::vector<fs::path> inputs;   // absolute
  std::vector<std::string> outputs;  // relative to out
  std::function<StageRun()> run;
};

// dataset ------------------------------------------------------------------

Stage dataset_stage(const Context& ctx) {
  dataset::BuildConfig bc;
  bc.seed = ctx.cfg.seed;
  bc.positives = static_cast<size_t>(ctx.integer("dataset.positives", 3));
  bc.negatives_per_family = static_cast<size_t>(ctx.integer("dataset.negatives_per_family", 10));
  bc.max_triplets_per_anchor =
      static_cast<size_t>(ctx.integer("dataset.max_triplets_per_anchor", 200));
  bc.anchor_jobs = static_cast<int>(ctx.integer("dataset.anchor_jobs", 1));
  Stage s;
  s.name = "dataset";
  s.params["seed"] = bc.seed;
  s.params["positives"] = bc.positives;
  s.params["negatives_per_family"] = bc.negatives_per_family;
  s.params["max_triplets_per_anchor"] = bc.max_triplets_per_anchor;
  s.params["tools"] = tools_json(ctx.tools);
  for (const auto& [name, cat] : dataset::reference_modules()) {
    s.inputs.push_back(ctx.cfg.corpus_dir / (name + ".v"));
  }
  s.outputs = {"dataset/triplets.jsonl", "dataset/summary.txt"};
  s.run = [&ctx, bc] {
    const auto corpus = dataset::load_corpus(ctx.cfg.corpus_dir);
    const validation::Harness harness(ctx.tools);
    const dataset::BuildResult r = dataset::build(corpus, bc, harness);
    if (r.samples.empty()) {
      throw Error(ErrorCode::kInsufficientCandidates, "no anchor produced a triplet");
    }
    dataset::write_jsonl(ctx.out / "dataset/triplets.jsonl", r.samples);
    std::string summary = r.report.summary();
    for (const std::string& line : r.report.log) summary += line + "\n";
    write_file(ctx.out / "dataset/summary.txt", summary);
    return StageRun{std::to_string(r.samples.size()) + " triplets"};
  };
  return s;
}

// features -----------------------------------------------------------------

Stage features_stage(const Context& ctx) {
  trace::BigramScorer::Options opt;
  opt.hidden_dim = static_cast<size_t>(ctx.integer("features.hidden_dim", 16));
  opt.smoothing = ctx.real("features.smoothing", 0.1);
  opt.seed = derive_seed(ctx.cfg.seed, 1);
  features::StatParams sp;
  sp.spike_sigmas = ctx.real("features.spike_sigmas", sp.spike_sigmas);
  sp.low_confidence_prob = ctx.real("features.low_confidence_prob", sp.low_confidence_prob);
  sp.last_k = static_cast<size_t>(ctx.integer("features.last_k", static_cast<int64_t>(sp.last_k)));
  Stage s;
  s.name = "features";
  s.params["scorer"] = "bigram, leave-one-module-out";
  s.params["hidden_dim"] = opt.hidden_dim;
  s.params["smoothing"] = opt.smoothing;
  s.params["embedding_seed"] = opt.seed;
  s.params["spike_sigmas"] = sp.spike_sigmas;
  s.params["low_confidence_prob"] = sp.low_confidence_prob;
  s.params["last_k"] = sp.last_k;
  s.inputs = {ctx.out / "dataset/triplets.jsonl"};
  s.outputs = {"features/features.jsonl", "features/traces"};
  s.run = [&ctx, opt, sp] {
    const auto samples = dataset::read_jsonl(ctx.out / "dataset/triplets.jsonl");
    // Unique texts per module, labelled 1 (anchor, positives) or 0.
    struct Item {
      std::string module;
      std::string id;
      std::string text;
      int label;
    };
    std::vector<Item> items;
    std::set<std::string> seen;
    std::map<std::string, std::string> anchors;  // module -> text
    std::map<std::string, size_t> per_module;
    auto add = [&](const std::string& module, const std::string& role, const std::string& text,
                   int label) {
      if (!seen.insert(module + '\0' + text).second) return;
      items.push_back({module, module + "-" + role + std::to_string(per_module[module]++), text,
                       label});
    };
    for (const auto& t : samples) {
      anchors[t.module_name] = t.anchor;
      add(t.module_name, "a", t.anchor, 1);
      add(t.module_name, "p", t.positive, 1);
      add(t.module_name, "n", t.negative, 0);
    }
    std::map<std::string, trace::BigramScorer> scorers;
    for (const auto& [module, text] : anchors) {
      std::vector<std::string> others;
      for (const auto& [m, a] : anchors) {
        if (m != module) others.push_back(a);
      }
      if (others.empty()) others.push_back(text);
      scorers.emplace(module, trace::BigramScorer::fit(others, opt));
    }
    const fs::path dir = ctx.out / "features/traces";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::vector<features::FeatureRow> rows;
    for (const Item& item : items) {
      trace::TokenTrace t = scorers.at(item.module).score(item.text, item.id);
      t.header.hidden_file = item.id + ".bin";
      t.header.label = item.label;
      trace::write_trace(dir / (item.id + ".jsonl"), t);
      rows.push_back(features::extract(t, "traces/" + item.id + ".bin", sp));
    }
    features::write_features(ctx.out / "features/features.jsonl", rows);
    const size_t ok = std::count_if(rows.begin(), rows.end(),
                                    [](const features::FeatureRow& r) { return r.label == 1; });
    return StageRun{std::to_string(rows.size()) + " traces (" + std::to_string(ok) + " valid, " +
                    std::to_string(rows.size() - ok) + " erroneous)"};
  };
  return s;
}

// clf ------------------------------------------------------------------------

void rows_to_matrix(const std::vector<features::FeatureRow>& rows, math::Matrix& x,
                    std::vector<int>& y) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no feature rows");
  const size_t d = rows[0].combined().size();
  x = math::Matrix(rows.size(), d);
  y.clear();
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto v = rows[i].combined();
    if (v.size() != d) {
      throw Error(ErrorCode::kDimensionMismatch, rows[i].trace_id + ": feature width differs");
    }
    if (!rows[i].label) throw Error(ErrorCode::kSchema, rows[i].trace_id + ": row has no label");
    std::copy(v.begin(), v.end(), x.row(i));
    y.push_back(*rows[i].label);
  }
}

Stage clf_stage(const Context& ctx) {
  classifier::TrainConfig tc;
  tc.seed = derive_seed(ctx.cfg.seed, 2);
  tc.learning_rate = ctx.real("clf.learning_rate", tc.learning_rate);
  tc.batch_size = static_cast<size_t>(ctx.integer("clf.batch_size", 8));
  tc.epochs = static_cast<size_t>(ctx.integer("clf.epochs", 100));
  tc.dropout = ctx.real("clf.dropout", tc.dropout);
  tc.split = ctx.real("clf.split", tc.split);
  tc.hidden = static_cast<size_t>(ctx.integer("clf.hidden", 256));
  tc.momentum = ctx.real("clf.momentum", tc.momentum);
  const std::string opt = ctx.text("clf.optimizer", "adam");
  if (opt == "momentum") {
    tc.optimizer = classifier::Optimizer::kMomentum;
  } else if (opt != "adam") {
    throw Error(ErrorCode::kInvalidArgument, "clf.optimizer must be adam or momentum");
  }
  tc.validate();
  Stage s;
  s.name = "clf";
  s.params["seed"] = tc.seed;
  s.params["learning_rate"] = tc.learning_rate;
  s.params["batch_size"] = tc.batch_size;
  s.params["epochs"] = tc.epochs;
  s.params["dropout"] = tc.dropout;
  s.params["split"] = tc.split;
  s.params["hidden"] = tc.hidden;
  s.params["optimizer"] = opt;
  s.params["momentum"] = tc.momentum;
  s.inputs = {ctx.out / "features/features.jsonl"};
  s.outputs = {"clf/model.bin", "clf/val_features.jsonl", "clf/history.csv"};
  s.run = [&ctx, tc] {
    const auto rows = features::read_features(ctx.out / "features/features.jsonl");
    math::Matrix x;
    std::vector<int> y;
    rows_to_matrix(rows, x, y);
    const classifier::TrainResult r = classifier::train(x, y, tc);
    classifier::save_model(ctx.out / "clf/model.bin", r.model);
    std::vector<features::FeatureRow> val;
    for (size_t i : r.val_rows) val.push_back(rows[i]);
    features::write_features(ctx.out / "clf/val_features.jsonl", val);
    std::ostringstream hist;
    hist.precision(9);
    hist << "epoch,train_loss,train_eval_loss,val_loss,val_accuracy\n";
    for (const auto& e : r.history) {
      hist << e.epoch << ',' << e.train_loss << ',' << e.train_eval_loss << ',' << e.val_loss
           << ',' << e.val_accuracy << '\n';
    }
    write_file(ctx.out / "clf/history.csv", hist.str());
    std::ostringstream msg;
    msg << r.train_rows.size() << " train / " << r.val_rows.size()
        << " val rows, val accuracy " << r.history.back().val_accuracy;
    return StageRun{msg.str()};
  };
  return s;
}

// sweep ----------------------------------------------------------------------

ordered_json metrics_json(const classifier::Metrics& m) {
  ordered_json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["accuracy"] = m.accuracy;
  j["positive_precision"] = m.positive_precision;
  j["positive_recall"] = m.positive_recall;
  j["positive_f1"] = m.positive_f1;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["tn"] = m.tn;
  j["fn"] = m.fn;
  return j;
}

Stage sweep_stage(const Context& ctx) {
  const double step = ctx.real("sweep.step", 0.001);
  if (!(step > 0.0 && step <= 0.5)) throw Error(ErrorCode::kInvalidArgument, "sweep.step must be in (0, 0.5]");
  Stage s;
  s.name = "sweep";
  s.params["step"] = step;
  s.inputs = {ctx.out / "clf/model.bin", ctx.out / "clf/val_features.jsonl"};
  s.outputs = {"sweep/curve.csv", "sweep/threshold.json"};
  s.run = [&ctx, step] {
    const auto model = classifier::load_model(ctx.out / "clf/model.bin");
    math::Matrix x;
    std::vector<int> y;
    rows_to_matrix(features::read_features(ctx.out / "clf/val_features.jsonl"), x, y);
    const auto scores = classifier::forward_batch(model, x);
    std::vector<double> grid;
    const auto n = static_cast<size_t>(std::llround(1.0 / step));
    for (size_t i = 0; i <= n; ++i) grid.push_back(std::min(1.0, static_cast<double>(i) * step));
    const classifier::Sweep sw = classifier::sweep_threshold(scores, y, grid);
    std::ostringstream csv;
    csv.precision(9);
    csv << "tau,f1\n";
    for (const auto& p : sw.curve) csv << p.tau << ',' << p.f1 << '\n';
    write_file(ctx.out / "sweep/curve.csv", csv.str());
    ordered_json j;
    j["best_tau"] = sw.best_tau;
    j["best_f1"] = sw.best_f1;
    j["at_best"] = metrics_json(classifier::metrics(scores, y, sw.best_tau));
    j["at_0.5"] = metrics_json(classifier::metrics(scores, y, 0.5));
    write_file(ctx.out / "sweep/threshold.json", j.dump(2) + "\n");
    std::ostringstream msg;
    msg << "best tau " << sw.best_tau << " (weighted F1 " << sw.best_f1 << ")";
    return StageRun{msg.str()};
  };
  return s;
}

// report ---------------------------------------------------------------------

Stage report_stage(const Context& ctx) {
  Stage s;
  s.name = "report";
  s.params["pca_components"] = 2;
  s.inputs = {ctx.out / "features/features.jsonl"};
  if (fs::exists(ctx.out / "sweep/threshold.json")) {
    s.inputs.push_back(ctx.out / "sweep/threshold.json");
  }
  s.outputs = {"report/pca.csv", "report/pca.svg", "report/report.json"};
  s.run = [&ctx] {
    const auto rows = features::read_features(ctx.out / "features/features.jsonl");
    std::vector<std::vector<double>> ok, err;
    for (const auto& r : rows) (r.label == 1 ? ok : err).push_back(r.v_sem);
    const auto rep = embedding::separability(math::Matrix::from_rows(ok), math::Matrix::from_rows(err));
    const std::string text = embedding::write_separability_report(rep, ctx.out / "report");
    ordered_json j;
    j["valid_traces"] = ok.size();
    j["erroneous_traces"] = err.size();
    j["separation_score"] = rep.score;
    j["explained_variance"] = rep.pca.explained_variance;
    j["total_variance"] = rep.pca.total_variance;
    if (fs::exists(ctx.out / "sweep/threshold.json")) {
      j["threshold"] = nlohmann::json::parse(read_file(ctx.out / "sweep/threshold.json"));
    }
    write_file(ctx.out / "report/report.json", j.dump(2) + "\n");
    std::ostringstream msg;
    msg << "separation score " << rep.score;
    return StageRun{msg.str()};
  };
  return s;
}

// manifest -------------------------------------------------------------------

ordered_json load_manifest(const fs::path& path) {
  if (!fs::exists(path)) return ordered_json::object();
  try {
    ordered_json j = ordered_json::parse(read_file(path));
    if (j.is_object() && j.value("schema", "") == "forge-manifest") return j;
  } catch (const nlohmann::json::exception&) {
  }
  return ordered_json::object();  // unreadable: treat every stage as stale
}

ordered_json hash_inputs(const std::vector<fs::path>& inputs) {
  ordered_json j = ordered_json::object();
  for (const fs::path& p : inputs) {
    if (!fs::exists(p)) {
      throw Error(ErrorCode::kIo, "missing input " + p.string() + " (run the stage that produces it)");
    }
    j[p.string()] = content_hash(p);
  }
  return j;
}

bool up_to_date(const ordered_json& prev, const Stage& s, const ordered_json& inputs,
                const fs::path& out) {
  if (!prev.is_object() || prev.value("status", "") != "ok") return false;
  if (prev.value("params", ordered_json()) != s.params) return false;
  if (prev.value("inputs", ordered_json()) != inputs) return false;
  const ordered_json outputs = prev.value("outputs", ordered_json::object());
  if (outputs.size() != s.outputs.size()) return false;
  for (const std::string& o : s.outputs) {
    if (!outputs.contains(o) || !fs::exists(out / o)) return false;
    if (content_hash(out / o) != outputs[o].get<std::string>()) return false;
  }
  return true;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, std::ostream* log) {
  for (const auto& [key, value] : cfg.overrides.values()) {
    if (!known_overrides().count(key)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown pipeline parameter '" + key + "'");
    }
  }
  if (cfg.out_dir.empty()) throw Error(ErrorCode::kInvalidArgument, "no output directory");
  const std::vector<std::string> stages = resolve_stages(cfg.stages);

  KvConfig tool_kv;
  if (!cfg.tools_config.empty()) tool_kv = KvConfig::load(cfg.tools_config);
  for (const auto& [key, value] : cfg.overrides.values()) {
    if (key.rfind("tools.", 0) == 0) tool_kv.set(key, value);
  }
  Context ctx{cfg, cfg.out_dir, validation::ToolConfig::from_config(tool_kv)};
  fs::create_directories(ctx.out);

  const fs::path manifest_path = ctx.out / "manifest.json";
  ordered_json manifest = load_manifest(manifest_path);
  manifest["schema"] = "forge-manifest";
  manifest["version"] = 1;
  manifest["seed"] = cfg.seed;
  manifest["corpus"] = fs::absolute(cfg.corpus_dir).string();
  manifest["tools_config"] = cfg.tools_config.empty() ? "" : fs::absolute(cfg.tools_config).string();
  if (!manifest.contains("stages")) manifest["stages"] = ordered_json::object();
  auto save = [&] { write_file(manifest_path, manifest.dump(2) + "\n"); };

  PipelineResult result;
  result.manifest = manifest_path;
  for (const std::string& name : stages) {
    const auto started = std::chrono::steady_clock::now();
    std::string component = stage_component(name);
    StageOutcome outcome;
    outcome.name = name;
    try {
      Stage s = name == "dataset"    ? dataset_stage(ctx)
                : name == "features" ? features_stage(ctx)
                : name == "clf"      ? clf_stage(ctx)
                : name == "sweep"    ? sweep_stage(ctx)
                                     : report_stage(ctx);
      const ordered_json inputs = hash_inputs(s.inputs);
      const ordered_json& prev = manifest["stages"].value(name, ordered_json());
      if (up_to_date(prev, s, inputs, ctx.out)) {
        outcome.summary = prev.value("summary", "");
        result.stages.push_back(outcome);
        if (log) *log << name << ": up-to-date\n";
        continue;
      }
      const StageRun run = s.run();
      outcome.ran = true;
      outcome.summary = run.summary;
      outcome.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      ordered_json rec;
      rec["status"] = "ok";
      rec["params"] = s.params;
      rec["inputs"] = inputs;
      rec["outputs"] = ordered_json::object();
      for (const std::string& o : s.outputs) rec["outputs"][o] = content_hash(ctx.out / o);
      rec["summary"] = run.summary;
      rec["seconds"] = outcome.seconds;
      manifest["stages"][name] = rec;
      save();
      result.stages.push_back(outcome);
      if (log) *log << name << ": ran in " << outcome.seconds << " s, " << run.summary << "\n";
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kToolUnavailable || e.code() == ErrorCode::kTimeout) {
        component = "validation-harness";
      }
      ordered_json rec;
      rec["status"] = "failed";
      rec["component"] = component;
      rec["error"] = e.what();
      manifest["stages"][name] = rec;
      save();
      throw StageError(name, component, e);
    }
  }
  save();
  return result;
}

}  // namespace forge::pipeline
