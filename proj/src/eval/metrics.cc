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


#include "forge/eval/metrics.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/json_reader.h"
#include "forge/util/rng.h"
#include "forge/validation/harness.h"

namespace forge::eval {

int ProblemResult::c() const {
  return static_cast<int>(std::count_if(verdicts.begin(), verdicts.end(),
                                        [](const CandidateVerdict& v) { return v.functional; }));
}

void ProblemResult::validate() const {
  if (problem_id.empty()) throw Error(ErrorCode::kInvalidArgument, "problem_id is empty");
  for (size_t i = 0; i < verdicts.size(); ++i) {
    if (verdicts[i].functional && !verdicts[i].compiled) {
      throw Error(ErrorCode::kInvalidArgument,
                  problem_id + ": candidate " + std::to_string(i) + " is functional but did not compile");
    }
  }
}

namespace {

void check_domain(int n, int c, int k) {
  if (n < 1 || c < 0 || c > n || k < 1 || k > n) {
    throw Error(ErrorCode::kDomain, "pass@k needs 0 <= c <= n and 1 <= k <= n (n=" +
                                        std::to_string(n) + ", c=" + std::to_string(c) +
                                        ", k=" + std::to_string(k) + ")");
  }
}

}  // namespace

double pass_at_k(int n, int c, int k) {
  check_domain(n, c, k);
  if (n - c < k) return 1.0;
  double miss = 1.0;
  for (int i = 0; i < k; ++i) {
    miss *= static_cast<double>(n - c - i) / static_cast<double>(n - i);
  }
  return std::clamp(1.0 - miss, 0.0, 1.0);
}

double pass_at_k_enumerated(int n, int c, int k) {
  check_domain(n, c, k);
  if (n > 24) throw Error(ErrorCode::kDomain, "enumeration is limited to n <= 24");
  // Samples 0..c-1 are the correct ones.
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  uint64_t total = 0, hits = 0;
  do {
    ++total;
    if (std::find(pick.begin(), pick.begin() + c, true) != pick.begin() + c) ++hits;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

double pass_at_k_sampled(int n, int c, int k, uint64_t draws, uint64_t seed) {
  check_domain(n, c, k);
  if (draws == 0) throw Error(ErrorCode::kInvalidArgument, "draws must be positive");
  Rng rng(seed);
  std::vector<int> idx(n);
  uint64_t hits = 0;
  for (uint64_t d = 0; d < draws; ++d) {
    std::iota(idx.begin(), idx.end(), 0);
    bool hit = false;
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(rng.below(static_cast<uint64_t>(n - i)));
      std::swap(idx[i], idx[j]);
      hit = hit || idx[i] < c;
    }
    hits += hit;
  }
  return static_cast<double>(hits) / static_cast<double>(draws);
}

std::string_view criterion_name(Criterion c) {
  return c == Criterion::kCompile ? "compile" : "functional";
}

Criterion parse_criterion(std::string_view name) {
  if (name == "compile") return Criterion::kCompile;
  if (name == "functional") return Criterion::kFunctional;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown criterion '" + std::string(name) + "' (expected compile or functional)");
}

double success_rate(const std::vector<ProblemResult>& results, Criterion criterion) {
  uint64_t total = 0, ok = 0;
  for (const ProblemResult& p : results) {
    p.validate();
    for (const CandidateVerdict& v : p.verdicts) {
      ++total;
      ok += criterion == Criterion::kCompile ? v.compiled : v.functional;
    }
  }
  if (total == 0) throw Error(ErrorCode::kEmptyInput, "no candidates to score");
  return 100.0 * static_cast<double>(ok) / static_cast<double>(total);
}

Report aggregate(const std::vector<ProblemResult>& results, const std::vector<int>& ks) {
  if (results.empty()) throw Error(ErrorCode::kEmptyInput, "no problems to aggregate");
  if (ks.empty()) throw Error(ErrorCode::kInvalidArgument, "no k values given");
  Report r;
  r.ks = ks;
  r.mean_pass.assign(ks.size(), 0.0);
  for (const ProblemResult& p : results) {
    p.validate();
    ProblemRow row;
    row.problem_id = p.problem_id;
    row.n = p.n();
    row.c = p.c();
    row.compiled = static_cast<int>(std::count_if(
        p.verdicts.begin(), p.verdicts.end(), [](const CandidateVerdict& v) { return v.compiled; }));
    for (size_t j = 0; j < ks.size(); ++j) {
      row.pass.push_back(pass_at_k(row.n, row.c, ks[j]));
      r.mean_pass[j] += row.pass.back();
    }
    r.rows.push_back(std::move(row));
  }
  for (double& m : r.mean_pass) m /= static_cast<double>(results.size());
  r.compile_rate = success_rate(results, Criterion::kCompile);
  r.functional_rate = success_rate(results, Criterion::kFunctional);
  return r;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string report_csv(const Report& r) {
  std::ostringstream os;
  os << "problem_id,n,c,compiled";
  for (int k : r.ks) os << ",pass@" << k;
  os << '\n';
  for (const ProblemRow& row : r.rows) {
    os << csv_field(row.problem_id) << ',' << row.n << ',' << row.c << ',' << row.compiled;
    for (double p : row.pass) os << ',' << fmt(p);
    os << '\n';
  }
  os << "mean,,,";
  for (double p : r.mean_pass) os << ',' << fmt(p);
  os << '\n';
  return os.str();
}

std::string report_json(const Report& r) {
  nlohmann::json j;
  j["ks"] = r.ks;
  nlohmann::json mean = nlohmann::json::object();
  for (size_t i = 0; i < r.ks.size(); ++i) mean["pass@" + std::to_string(r.ks[i])] = r.mean_pass[i];
  j["mean"] = mean;
  j["compile_rate"] = r.compile_rate;
  j["functional_rate"] = r.functional_rate;
  j["problems"] = nlohmann::json::array();
  for (const ProblemRow& row : r.rows) {
    nlohmann::json pj = {{"problem_id", row.problem_id}, {"n", row.n}, {"c", row.c},
                         {"compiled", row.compiled}};
    for (size_t i = 0; i < r.ks.size(); ++i) pj["pass@" + std::to_string(r.ks[i])] = row.pass[i];
    j["problems"].push_back(pj);
  }
  return j.dump(2) + "\n";
}

std::string results_jsonl(const std::vector<ProblemResult>& results) {
  std::string out;
  for (const ProblemResult& p : results) {
    p.validate();
    nlohmann::ordered_json j;
    j["problem_id"] = p.problem_id;
    j["n"] = p.n();
    j["c"] = p.c();
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const CandidateVerdict& v : p.verdicts) {
      j["verdicts"].push_back({{"compiled", v.compiled}, {"functional", v.functional}});
    }
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<ProblemResult> parse_results(std::string_view text) {
  std::vector<ProblemResult> out;
  std::istringstream in{std::string(text)};
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "results line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchema, where + ": " + e.what());
    }
    JsonReader rd(j, where);
    ProblemResult p;
    p.problem_id = rd.str("problem_id");
    for (const auto& v : rd.field("verdicts", nlohmann::json::value_t::array)) {
      JsonReader vr(v, where);
      CandidateVerdict cv;
      cv.compiled = vr.boolean("compiled");
      cv.functional = vr.boolean("functional");
      vr.done();
      p.verdicts.push_back(cv);
    }
    if (rd.optional("n") && rd.i64("n") != p.n()) rd.fail("n disagrees with the verdicts");
    if (rd.optional("c") && rd.i64("c") != p.c()) rd.fail("c disagrees with the verdicts");
    rd.done();
    try {
      p.validate();
    } catch (const Error& e) {
      rd.fail(e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<ProblemResult> read_results(const std::filesystem::path& path) {
  return parse_results(read_file(path));
}

void write_results(const std::filesystem::path& path, const std::vector<ProblemResult>& results) {
  write_file(path, results_jsonl(results));
}

ProblemResult score_candidates(const validation::Harness& harness, const std::string& problem_id,
                               const std::vector<std::string>& candidates,
                               const std::string& reference, uint64_t stim_seed) {
  ProblemResult p;
  p.problem_id = problem_id;
  for (const std::string& cand : candidates) {
    CandidateVerdict v;
    v.compiled = harness.check_compile(cand).compiled;
    if (v.compiled) {
      v.functional =
          harness.check_functional(cand, reference, stim_seed).status == validation::Status::kEquivalent;
    }
    p.verdicts.push_back(v);
  }
  return p;
}

}  // namespace forge::eval
