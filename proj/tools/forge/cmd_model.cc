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


#include <iostream>
#include <sstream>

#include "forge/classifier/classifier.h"
#include "forge/dataset/dataset.h"
#include "forge/embedding/embedding.h"
#include "forge/features/feature_file.h"
#include "forge/trace/surrogate.h"
#include "forge/util/error.h"
#include "forge/util/io.h"
#include "tools/forge/common.h"

namespace forge::cli {

namespace fs = std::filesystem;

namespace {

void add_dataset(CLI::App& app, Globals& g) {
  auto* top = app.add_subcommand("dataset", "Triplet dataset construction");
  top->require_subcommand(1);
  auto* cmd = top->add_subcommand("build", "Build (anchor, positive, negative) triplets from a corpus");
  struct Opts {
    std::string corpus;
    std::string out;
    uint64_t seed = 0;
    size_t positives = 3;
    size_t negatives = 10;
    size_t max_per_anchor = 200;
    std::string rule;
    std::string config;
    int jobs = 1;
    std::string summary;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--corpus", o->corpus, "Directory of anchor .v files")->required()->check(CLI::ExistingDirectory);
  cmd->add_option("--out", o->out, "triplets.jsonl")->required();
  cmd->add_option("--seed", o->seed, "Seed");
  cmd->add_option("--positives", o->positives, "Positives per anchor");
  cmd->add_option("--negatives-per-family", o->negatives, "Negative candidates per family");
  cmd->add_option("--max-per-anchor", o->max_per_anchor, "Triplet cap per anchor");
  cmd->add_option("--rule", o->rule, "Draw negatives from this single rule");
  cmd->add_option("--config", o->config, "tools.toml (default: $FORGE_TOOLS)");
  cmd->add_option("--jobs", o->jobs, "Anchors built concurrently");
  cmd->add_option("--summary", o->summary, "Also write the summary here");
  cmd->callback([o, &g] {
    dataset::BuildConfig bc;
    bc.seed = o->seed;
    bc.positives = o->positives;
    bc.negatives_per_family = o->negatives;
    bc.max_triplets_per_anchor = o->max_per_anchor;
    bc.anchor_jobs = o->jobs;
    if (!o->rule.empty()) bc.rule = o->rule;
    const validation::Harness harness(load_tools(o->config));
    const auto r = dataset::build(dataset::load_corpus(o->corpus), bc, harness);
    dataset::write_jsonl(o->out, r.samples);
    std::string text = r.report.summary();
    for (const auto& line : r.report.log) text += line + "\n";
    if (!o->summary.empty()) write_file(o->summary, text);
    ordered_json j;
    j["out"] = o->out;
    j["total_triplets"] = r.report.total_triplets;
    j["by_category"] = r.report.triplets_by_category;
    j["by_family"] = r.report.triplets_by_family;
    j["anchors"] = ordered_json::array();
    for (const auto& a : r.report.anchors) {
      ordered_json aj;
      aj["module"] = a.module_name;
      aj["category"] = a.category;
      aj["positives_generated"] = a.positives_generated;
      aj["positives_retained"] = a.positives_retained;
      aj["negatives_generated"] = a.negatives_generated;
      aj["negatives_retained"] = a.negatives_retained;
      aj["triplets"] = a.triplets;
      if (a.insufficient) aj["insufficient"] = *a.insufficient;
      j["anchors"].push_back(aj);
    }
    emit(g, j, text);
  });
}

void add_features(CLI::App& app, Globals& g) {
  auto* top = app.add_subcommand("features", "Uncertainty and hidden-state features");
  top->require_subcommand(1);

  auto* ext = top->add_subcommand("extract", "Turn token traces into feature rows");
  struct ExtractOpts {
    std::vector<std::string> traces;
    std::string hidden;
    std::string out;
    double sigmas = 2.0;
    double low_prob = 0.1;
    size_t last_k = 10;
  };
  auto e = std::make_shared<ExtractOpts>();
  ext->add_option("--trace", e->traces, "Trace file(s)")->required()->check(CLI::ExistingFile);
  ext->add_option("--hidden", e->hidden, "Hidden-state sidecar (single trace only)")->check(CLI::ExistingFile);
  ext->add_option("--out", e->out, "features.jsonl")->required();
  ext->add_option("--spike-sigmas", e->sigmas, "Spike threshold in standard deviations");
  ext->add_option("--low-confidence-prob", e->low_prob, "Low-confidence probability cutoff");
  ext->add_option("--last-k", e->last_k, "Tokens in the tail mean");
  ext->callback([e, &g] {
    if (!e->hidden.empty() && e->traces.size() != 1) usage("--hidden needs exactly one --trace");
    features::StatParams sp;
    sp.spike_sigmas = e->sigmas;
    sp.low_confidence_prob = e->low_prob;
    sp.last_k = e->last_k;
    std::vector<features::FeatureRow> rows;
    for (const std::string& path : e->traces) {
      trace::TokenTrace t = trace::read_trace(path, e->hidden.empty());
      std::string ref;
      if (!e->hidden.empty()) {
        t.hidden = trace::read_hidden(e->hidden);
        ref = e->hidden;
      } else {
        ref = (fs::path(path).parent_path() / t.header.hidden_file).string();
      }
      rows.push_back(features::extract(t, ref, sp));
    }
    features::write_features(e->out, rows);
    ordered_json j;
    j["out"] = e->out;
    j["rows"] = rows.size();
    j["features"] = features::stat_feature_names();
    emit(g, j, std::to_string(rows.size()) + " feature row(s) written to " + e->out);
  });

  auto* sc = top->add_subcommand(
      "score", "Trace Verilog files with the bigram surrogate scorer (no language model needed)");
  struct ScoreOpts {
    std::vector<std::string> files;
    std::string corpus;
    std::string out;
    int label = -1;
    size_t dim = 16;
    uint64_t seed = 0;
  };
  auto s = std::make_shared<ScoreOpts>();
  sc->add_option("files", s->files, "Verilog files to score")->required()->check(CLI::ExistingFile);
  sc->add_option("--corpus", s->corpus, "Directory of .v files to fit the scorer on")
      ->required()
      ->check(CLI::ExistingDirectory);
  sc->add_option("--out", s->out, "Output directory for traces")->required();
  sc->add_option("--label", s->label, "Label to record (1 valid, 0 erroneous)")->check(CLI::Range(0, 1));
  sc->add_option("--dim", s->dim, "Hidden-state width");
  sc->add_option("--seed", s->seed, "Embedding seed");
  sc->callback([s, &g] {
    std::vector<std::string> texts;
    std::vector<fs::path> corpus_files;
    for (const auto& entry : fs::directory_iterator(s->corpus)) {
      if (entry.path().extension() == ".v") corpus_files.push_back(entry.path());
    }
    std::sort(corpus_files.begin(), corpus_files.end());
    for (const auto& p : corpus_files) texts.push_back(read_file(p));
    if (texts.empty()) usage(s->corpus + " holds no .v files");
    trace::BigramScorer::Options opt;
    opt.hidden_dim = s->dim;
    opt.seed = s->seed;
    const auto scorer = trace::BigramScorer::fit(texts, opt);
    ordered_json j = ordered_json::array();
    std::ostringstream text;
    for (const std::string& file : s->files) {
      const std::string id = fs::path(file).stem().string();
      trace::TokenTrace t = scorer.score(read_file(file), id);
      t.header.hidden_file = id + ".bin";
      if (s->label >= 0) t.header.label = s->label;
      const fs::path out = fs::path(s->out) / (id + ".jsonl");
      trace::write_trace(out, t);
      j.push_back({{"trace", out.string()}, {"tokens", t.records.size()}});
      text << out.string() << "  " << t.records.size() << " tokens\n";
    }
    emit(g, j, text.str());
  });
}

void load_rows(const std::string& path, std::vector<features::FeatureRow>& rows, math::Matrix& x,
               std::vector<int>& y) {
  rows = features::read_features(path);
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, path + " holds no rows");
  const size_t d = rows[0].combined().size();
  x = math::Matrix(rows.size(), d);
  y.clear();
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto v = rows[i].combined();
    if (v.size() != d) throw Error(ErrorCode::kDimensionMismatch, rows[i].trace_id + ": width differs");
    if (!rows[i].label) throw Error(ErrorCode::kSchema, rows[i].trace_id + ": row has no label");
    std::copy(v.begin(), v.end(), x.row(i));
    y.push_back(*rows[i].label);
  }
}

ordered_json metrics_json(const classifier::Metrics& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"accuracy", m.accuracy},
          {"positive_precision", m.positive_precision},
          {"positive_recall", m.positive_recall},
          {"positive_f1", m.positive_f1}};
}

void add_clf(CLI::App& app, Globals& g) {
  auto* top = app.add_subcommand("clf", "Validity classifier");
  top->require_subcommand(1);

  auto* tr = top->add_subcommand("train", "Train the classifier on feature rows");
  struct TrainOpts {
    std::string features;
    std::string out;
    std::string val_out;
    std::string history;
    std::string optimizer = "adam";
    classifier::TrainConfig cfg;
  };
  auto t = std::make_shared<TrainOpts>();
  tr->add_option("--features", t->features, "features.jsonl")->required()->check(CLI::ExistingFile);
  tr->add_option("--out", t->out, "model.bin")->required();
  tr->add_option("--seed", t->cfg.seed, "Seed");
  tr->add_option("--lr", t->cfg.learning_rate, "Learning rate");
  tr->add_option("--batch", t->cfg.batch_size, "Batch size");
  tr->add_option("--epochs", t->cfg.epochs, "Epochs");
  tr->add_option("--dropout", t->cfg.dropout, "Dropout rate");
  tr->add_option("--split", t->cfg.split, "Training fraction");
  tr->add_option("--hidden", t->cfg.hidden, "Hidden units");
  tr->add_option("--optimizer", t->optimizer, "adam or momentum")->check(CLI::IsMember({"adam", "momentum"}));
  tr->add_option("--val-out", t->val_out, "Write the validation rows here");
  tr->add_option("--history", t->history, "Write per-epoch losses here (CSV)");
  tr->callback([t, &g] {
    classifier::TrainConfig cfg = t->cfg;
    cfg.optimizer = t->optimizer == "momentum" ? classifier::Optimizer::kMomentum
                                               : classifier::Optimizer::kAdam;
    std::vector<features::FeatureRow> rows;
    math::Matrix x;
    std::vector<int> y;
    load_rows(t->features, rows, x, y);
    const auto r = classifier::train(x, y, cfg);
    classifier::save_model(t->out, r.model);
    if (!t->val_out.empty()) {
      std::vector<features::FeatureRow> val;
      for (size_t i : r.val_rows) val.push_back(rows[i]);
      features::write_features(t->val_out, val);
    }
    ordered_json hist = ordered_json::array();
    std::ostringstream csv;
    csv.precision(9);
    csv << "epoch,train_loss,train_eval_loss,val_loss,val_accuracy\n";
    for (const auto& e : r.history) {
      hist.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"train_eval_loss", e.train_eval_loss},
                      {"val_loss", e.val_loss},
                      {"val_accuracy", e.val_accuracy}});
      csv << e.epoch << ',' << e.train_loss << ',' << e.train_eval_loss << ',' << e.val_loss << ','
          << e.val_accuracy << '\n';
    }
    if (!t->history.empty()) write_file(t->history, csv.str());
    ordered_json j;
    j["model"] = t->out;
    j["input_dim"] = r.model.input_dim();
    j["train_rows"] = r.train_rows.size();
    j["val_rows"] = r.val_rows.size();
    j["history"] = hist;
    std::ostringstream text;
    text << "trained on " << r.train_rows.size() << " rows, validated on " << r.val_rows.size()
         << "; final val loss " << r.history.back().val_loss << ", val accuracy "
         << r.history.back().val_accuracy << "\nmodel written to " << t->out << "\n";
    emit(g, j, text.str());
  });

  auto* sw = top->add_subcommand("sweep", "Sweep the decision threshold on labelled rows");
  struct SweepOpts {
    std::string model;
    std::string features;
    std::string out;
  };
  auto s = std::make_shared<SweepOpts>();
  sw->add_option("--model", s->model, "model.bin")->required()->check(CLI::ExistingFile);
  sw->add_option("--features", s->features, "Labelled feature rows")->required()->check(CLI::ExistingFile);
  sw->add_option("--out", s->out, "curve.csv")->required();
  sw->callback([s, &g] {
    const auto model = classifier::load_model(s->model);
    std::vector<features::FeatureRow> rows;
    math::Matrix x;
    std::vector<int> y;
    load_rows(s->features, rows, x, y);
    const auto scores = classifier::forward_batch(model, x);
    const auto r = classifier::sweep_threshold(scores, y);
    std::ostringstream csv;
    csv.precision(9);
    csv << "tau,f1\n";
    for (const auto& p : r.curve) csv << p.tau << ',' << p.f1 << '\n';
    write_file(s->out, csv.str());
    ordered_json j;
    j["best_tau"] = r.best_tau;
    j["best_f1"] = r.best_f1;
    j["at_best"] = metrics_json(classifier::metrics(scores, y, r.best_tau));
    j["curve"] = s->out;
    std::ostringstream text;
    text << "best tau " << r.best_tau << " (weighted F1 " << r.best_f1 << ")\ncurve written to "
         << s->out << "\n";
    emit(g, j, text.str());
  });
}

void add_report(CLI::App& app, Globals& g) {
  auto* top = app.add_subcommand("report", "Embedding reports");
  top->require_subcommand(1);
  auto* cmd = top->add_subcommand("pca", "Joint 2-D PCA and separation score of two embedding sets");
  struct Opts {
    std::string ok;
    std::string err;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--ok", o->ok, "Embeddings of valid code (hidden-state file)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--err", o->err, "Embeddings of erroneous code")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o->out, "Report directory")->required();
  cmd->callback([o, &g] {
    const auto rep =
        embedding::separability(trace::read_hidden(o->ok), trace::read_hidden(o->err));
    const std::string text = embedding::write_separability_report(rep, o->out);
    ordered_json j;
    j["separation_score"] = rep.score;
    j["explained_variance"] = rep.pca.explained_variance;
    j["total_variance"] = rep.pca.total_variance;
    j["out"] = o->out;
    emit(g, j, text);
  });
}

}  // namespace

void add_model_commands(CLI::App& app, Globals& g) {
  add_dataset(app, g);
  add_features(app, g);
  add_clf(app, g);
  add_report(app, g);
}

}  // namespace forge::cli
