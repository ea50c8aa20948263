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


#include "forge/dataset/dataset.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/json_reader.h"
#include "forge/util/rng.h"
#include "forge/verilog/parser.h"
#include "forge/verilog/semantic.h"

namespace forge::dataset {

using nlohmann::ordered_json;
using validation::Verdict;

namespace {

constexpr const char* kCategoryNames[] = {"Boolean Functions", "Arithmetic", "Data Path",
                                          "Codecs",            "Storage",    "Counters",
                                          "Memory",            "FSMs"};

bool same_verdict(const Verdict& a, const Verdict& b) {
  return a.status == b.status && a.tool_log == b.tool_log && a.runs == b.runs &&
         a.compiled == b.compiled && a.backend == b.backend;
}

bool same_transform(const positive::TransformRecord& a, const positive::TransformRecord& b) {
  return a.transform_id == b.transform_id && a.details == b.details && a.seed == b.seed &&
         a.renaming == b.renaming;
}

bool same_mutation(const mutation::MutationRecord& a, const mutation::MutationRecord& b) {
  return a.rule_id == b.rule_id && a.site == b.site && a.original_text == b.original_text &&
         a.mutated_text == b.mutated_text && a.seed == b.seed;
}

std::string family_of(const std::string& rule_id) {
  return std::string(mutation::family_name(mutation::find_rule(rule_id).family));
}

struct AnchorOutput {
  std::vector<TripletSample> samples;
  AnchorReport report;
  std::vector<std::string> log;
};

AnchorOutput build_anchor(const CorpusEntry& entry, const BuildConfig& cfg,
                          const validation::Harness& harness) {
  AnchorOutput out;
  AnchorReport& rep = out.report;
  rep.module_name = entry.module_name;
  rep.category = std::string(category_name(entry.category));
  const std::string anchor = read_file(entry.anchor_path);
  const verilog::FrontendCheck check = verilog::check_source(anchor);
  if (!check.ok()) {
    throw Error(ErrorCode::kAnchorInvalid, entry.module_name + ": " + check.summary());
  }
  const Verdict compiled = harness.check_compile(anchor);
  if (!compiled.compiled) {
    throw Error(ErrorCode::kAnchorInvalid,
                entry.module_name + " does not compile:\n" + compiled.tool_log);
  }
  const uint64_t anchor_seed = derive_seed(cfg.seed, fnv1a(entry.module_name));

  std::vector<positive::Positive> positives =
      positive::generate_positives(check.unit, cfg.positives, anchor_seed);
  rep.positives_generated = positives.size();

  std::vector<mutation::Mutant> negatives;
  std::set<std::string> seen;
  auto add = [&](std::vector<mutation::Mutant> ms) {
    for (auto& m : ms) {
      if (seen.insert(m.source).second) negatives.push_back(std::move(m));
    }
  };
  if (cfg.rule) {
    add(mutation::mutate(check.unit, mutation::find_rule(*cfg.rule), anchor_seed,
                         cfg.negatives_per_family));
  } else {
    for (mutation::Family f : cfg.families) {
      add(mutation::mutate_family(check.unit, f, anchor_seed, cfg.negatives_per_family));
    }
  }
  for (const auto& m : negatives) ++rep.negatives_generated[family_of(m.record.rule_id)];

  std::vector<Verdict> pos_verdicts;
  for (const auto& p : positives) pos_verdicts.push_back(harness.classify_positive(p.source, anchor));
  std::vector<Verdict> neg_verdicts;
  std::vector<uint64_t> stim_seeds;
  for (size_t i = 0; i < negatives.size(); ++i) {
    stim_seeds.push_back(derive_seed(anchor_seed, i));
    neg_verdicts.push_back(harness.classify_negative(negatives[i].source, anchor, stim_seeds[i]));
  }

  std::vector<size_t> kept_pos;
  for (size_t i = 0; i < positives.size(); ++i) {
    if (validation::retain_positive(pos_verdicts[i])) kept_pos.push_back(i);
  }
  std::vector<size_t> kept_neg;
  std::vector<std::string> kept_families;
  for (size_t i = 0; i < negatives.size(); ++i) {
    if (!validation::retain_negative(neg_verdicts[i])) continue;
    kept_neg.push_back(i);
    kept_families.push_back(family_of(negatives[i].record.rule_id));
    ++rep.negatives_retained[kept_families.back()];
  }
  rep.positives_retained = kept_pos.size();

  if (kept_pos.empty() || kept_neg.empty()) {
    std::ostringstream why;
    why << "InsufficientCandidates: " << entry.module_name << " retained " << kept_pos.size()
        << "/" << positives.size() << " positives and " << kept_neg.size() << "/"
        << negatives.size() << " negatives; anchor skipped";
    rep.insufficient = why.str();
    out.log.push_back(why.str());
    return out;
  }

  const std::vector<size_t> order = interleave_by_family(kept_families);
  for (const auto& [pi, ni] :
       pair_indices(kept_pos.size(), kept_neg.size(), cfg.max_triplets_per_anchor)) {
    const positive::Positive& p = positives[kept_pos[pi]];
    const size_t neg = kept_neg[order[ni]];
    const mutation::Mutant& n = negatives[neg];
    if (p.source == n.source) continue;
    TripletSample s;
    s.id = entry.module_name + "-" + std::to_string(out.samples.size());
    s.module_name = entry.module_name;
    s.category = rep.category;
    s.anchor = anchor;
    s.positive = p.source;
    s.negative = n.source;
    s.positive_meta = p.record;
    s.negative_meta = n.record;
    s.stim_seed = stim_seeds[neg];
    s.positive_verdict = pos_verdicts[kept_pos[pi]];
    s.negative_verdict = neg_verdicts[neg];
    out.samples.push_back(std::move(s));
  }
  rep.triplets = out.samples.size();
  return out;
}

ordered_json verdict_json(const Verdict& v) {
  ordered_json j;
  j["status"] = validation::status_name(v.status);
  j["runs"] = v.runs;
  j["compiled"] = v.compiled;
  j["backend"] = v.backend;
  j["tool_log"] = v.tool_log;
  return j;
}

Verdict read_verdict(const nlohmann::json& j, const std::string& where) {
  JsonReader r(j, where);
  Verdict v;
  const std::string status = r.str("status");
  try {
    v.status = validation::parse_status(status);
  } catch (const Error&) {
    r.fail("unknown status '" + status + "'");
  }
  v.runs = static_cast<int>(r.u64("runs"));
  v.compiled = r.boolean("compiled");
  v.backend = r.str("backend");
  v.tool_log = r.str("tool_log");
  r.done();
  return v;
}

}  // namespace

std::string_view category_name(Category c) { return kCategoryNames[static_cast<int>(c)]; }

std::optional<Category> parse_category(std::string_view name) {
  for (int i = 0; i < 8; ++i) {
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

const std::vector<std::pair<std::string, Category>>& reference_modules() {
  static const std::vector<std::pair<std::string, Category>> kModules = {
      {"and_gate", Category::kBooleanFunctions},
      {"or_gate", Category::kBooleanFunctions},
      {"not_gate", Category::kBooleanFunctions},
      {"xor_gate", Category::kBooleanFunctions},
      {"half_adder", Category::kArithmetic},
      {"full_adder", Category::kArithmetic},
      {"comparator", Category::kArithmetic},
      {"mux", Category::kDataPath},
      {"decoder", Category::kCodecs},
      {"encoder", Category::kCodecs},
      {"d_flip_flop", Category::kStorage},
      {"counter", Category::kCounters},
      {"ram", Category::kMemory},
      {"rom", Category::kMemory},
      {"traffic_light_controller", Category::kFsms},
  };
  return kModules;
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir) {
  std::vector<CorpusEntry> out;
  for (const auto& [name, category] : reference_modules()) {
    const auto path = dir / (name + ".v");
    if (!std::filesystem::is_regular_file(path)) {
      throw Error(ErrorCode::kIo, "corpus module missing: " + path.string());
    }
    out.push_back({category, name, path});
  }
  return out;
}

bool TripletSample::operator==(const TripletSample& o) const {
  return id == o.id && module_name == o.module_name && category == o.category &&
         anchor == o.anchor && positive == o.positive && negative == o.negative &&
         same_transform(positive_meta, o.positive_meta) &&
         same_mutation(negative_meta, o.negative_meta) && stim_seed == o.stim_seed &&
         same_verdict(positive_verdict, o.positive_verdict) &&
         same_verdict(negative_verdict, o.negative_verdict);
}

std::string BuildReport::summary() const {
  std::ostringstream os;
  os << "anchor                    category           pos  neg  triplets\n";
  for (const auto& a : anchors) {
    size_t gen = 0;
    size_t kept = 0;
    for (const auto& [f, n] : a.negatives_generated) gen += n;
    for (const auto& [f, n] : a.negatives_retained) kept += n;
    char line[160];
    std::snprintf(line, sizeof(line), "%-25s %-18s %zu/%zu %zu/%zu %zu%s\n",
                  a.module_name.c_str(), a.category.c_str(), a.positives_retained,
                  a.positives_generated, kept, gen, a.triplets,
                  a.insufficient ? "  (insufficient candidates)" : "");
    os << line;
  }
  os << "triplets by category:";
  for (const auto& [c, n] : triplets_by_category) os << " " << c << "=" << n;
  os << "\ntriplets by family:";
  for (const auto& [f, n] : triplets_by_family) os << " " << f << "=" << n;
  os << "\ntotal triplets: " << total_triplets << " (reference dataset size ~3000)\n";
  return os.str();
}

std::vector<size_t> interleave_by_family(const std::vector<std::string>& families) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<size_t>> buckets;
  for (size_t i = 0; i < families.size(); ++i) {
    if (!buckets.count(families[i])) order.push_back(families[i]);
    buckets[families[i]].push_back(i);
  }
  std::vector<size_t> out;
  for (size_t round = 0; out.size() < families.size(); ++round) {
    for (const auto& f : order) {
      if (round < buckets[f].size()) out.push_back(buckets[f][round]);
    }
  }
  return out;
}

std::vector<std::pair<size_t, size_t>> pair_indices(size_t positives, size_t negatives,
                                                    size_t cap) {
  std::vector<std::pair<size_t, size_t>> out;
  if (positives == 0 || negatives == 0) return out;
  // k -> (k mod P, k mod N) visits lcm(P, N) distinct pairs; shifting the
  // positive by one per lcm block reaches the remaining gcd classes.
  const size_t block = std::lcm(positives, negatives);
  const size_t total = std::min(positives * negatives, cap);
  for (size_t k = 0; k < total; ++k) {
    out.emplace_back((k + k / block) % positives, k % negatives);
  }
  return out;
}

BuildResult build(const std::vector<CorpusEntry>& corpus, const BuildConfig& cfg,
                  const validation::Harness& harness) {
  if (cfg.positives == 0) throw Error(ErrorCode::kInvalidArgument, "positives must be >= 1");
  if (cfg.rule) mutation::find_rule(*cfg.rule);
  std::vector<AnchorOutput> outputs(corpus.size());
  std::vector<std::string> errors(corpus.size());
  std::vector<ErrorCode> codes(corpus.size(), ErrorCode::kSourceFailure);
  const long n = static_cast<long>(corpus.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, cfg.anchor_jobs))
  for (long i = 0; i < n; ++i) {
    const size_t k = static_cast<size_t>(i);
    try {
      outputs[k] = build_anchor(corpus[k], cfg, harness);
    } catch (const Error& e) {
      errors[k] = e.what();
      codes[k] = e.code();
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) throw Error(codes[i], errors[i]);
  }
  BuildResult result;
  for (auto& o : outputs) {
    for (auto& s : o.samples) {
      ++result.report.triplets_by_category[s.category];
      ++result.report.triplets_by_family[family_of(s.negative_meta.rule_id)];
      result.samples.push_back(std::move(s));
    }
    result.report.log.insert(result.report.log.end(), o.log.begin(), o.log.end());
    result.report.anchors.push_back(std::move(o.report));
  }
  result.report.total_triplets = result.samples.size();
  return result;
}

std::string to_json_line(const TripletSample& s) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = s.id;
  j["module"] = s.module_name;
  j["category"] = s.category;
  j["anchor"] = s.anchor;
  j["positive"] = s.positive;
  j["negative"] = s.negative;
  ordered_json pm;
  pm["transform"] = positive::transform_name(s.positive_meta.transform_id);
  pm["details"] = s.positive_meta.details;
  pm["seed"] = s.positive_meta.seed;
  pm["renaming"] = ordered_json::object();
  for (const auto& [from, to] : s.positive_meta.renaming) pm["renaming"][from] = to;
  j["positive_meta"] = pm;
  ordered_json nm;
  nm["rule_id"] = s.negative_meta.rule_id;
  nm["site_begin"] = s.negative_meta.site.begin;
  nm["site_end"] = s.negative_meta.site.end;
  nm["original_text"] = s.negative_meta.original_text;
  nm["mutated_text"] = s.negative_meta.mutated_text;
  nm["seed"] = s.negative_meta.seed;
  j["negative_meta"] = nm;
  j["stim_seed"] = s.stim_seed;
  ordered_json v;
  v["positive"] = verdict_json(s.positive_verdict);
  v["negative"] = verdict_json(s.negative_verdict);
  j["verdicts"] = v;
  return j.dump();
}

TripletSample from_json_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kSchema, std::string("invalid JSON: ") + e.what());
  }
  JsonReader r(j, "triplet");
  const uint64_t version = r.u64("schema_version");
  if (version != kSchemaVersion) {
    r.fail("unsupported schema_version " + std::to_string(version));
  }
  TripletSample s;
  s.id = r.str("id");
  s.module_name = r.str("module");
  s.category = r.str("category");
  if (!parse_category(s.category)) r.fail("unknown category '" + s.category + "'");
  s.anchor = r.str("anchor");
  s.positive = r.str("positive");
  s.negative = r.str("negative");
  {
    JsonReader pm(r.field("positive_meta", nlohmann::json::value_t::object), "positive_meta");
    const std::string name = pm.str("transform");
    const auto id = positive::parse_transform(name);
    if (!id) pm.fail("unknown transform '" + name + "'");
    s.positive_meta.transform_id = *id;
    s.positive_meta.details = pm.str("details");
    s.positive_meta.seed = pm.u64("seed");
    const auto& ren = pm.field("renaming", nlohmann::json::value_t::object);
    for (const auto& [from, to] : ren.items()) {
      if (!to.is_string()) pm.fail("renaming values must be strings");
      s.positive_meta.renaming[from] = to.get<std::string>();
    }
    pm.done();
  }
  {
    JsonReader nm(r.field("negative_meta", nlohmann::json::value_t::object), "negative_meta");
    s.negative_meta.rule_id = nm.str("rule_id");
    try {
      mutation::find_rule(s.negative_meta.rule_id);
    } catch (const Error&) {
      nm.fail("unknown rule '" + s.negative_meta.rule_id + "'");
    }
    s.negative_meta.site.begin = nm.u64("site_begin");
    s.negative_meta.site.end = nm.u64("site_end");
    if (s.negative_meta.site.end < s.negative_meta.site.begin) nm.fail("site_end < site_begin");
    s.negative_meta.original_text = nm.str("original_text");
    s.negative_meta.mutated_text = nm.str("mutated_text");
    s.negative_meta.seed = nm.u64("seed");
    nm.done();
  }
  s.stim_seed = r.u64("stim_seed");
  {
    JsonReader v(r.field("verdicts", nlohmann::json::value_t::object), "verdicts");
    s.positive_verdict =
        read_verdict(v.field("positive", nlohmann::json::value_t::object), "verdicts.positive");
    s.negative_verdict =
        read_verdict(v.field("negative", nlohmann::json::value_t::object), "verdicts.negative");
    v.done();
  }
  r.done();
  return s;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<TripletSample>& samples) {
  std::string text;
  for (const auto& s : samples) text += to_json_line(s) + "\n";
  write_file(path, text);
}

std::vector<TripletSample> parse_jsonl(std::string_view text) {
  std::vector<TripletSample> out;
  size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const size_t nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(from_json_line(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchema, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TripletSample> read_jsonl(const std::filesystem::path& path) {
  return parse_jsonl(read_file(path));
}

Revalidation revalidate(const std::vector<TripletSample>& samples,
                        const validation::Harness& harness, size_t stride) {
  Revalidation out;
  for (size_t i = 0; i < samples.size(); i += std::max<size_t>(1, stride)) {
    const TripletSample& s = samples[i];
    const Verdict p = harness.classify_positive(s.positive, s.anchor);
    const Verdict n = harness.classify_negative(s.negative, s.anchor, s.stim_seed);
    ++out.checked;
    if (p.status != s.positive_verdict.status || n.status != s.negative_verdict.status) {
      out.disagreements.push_back(s.id);
    }
  }
  return out;
}

}  // namespace forge::dataset
