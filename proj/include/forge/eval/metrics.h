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


#ifndef FORGE_EVAL_METRICS_H_
#define FORGE_EVAL_METRICS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace forge::validation {
class Harness;
}

namespace forge::eval {

inline constexpr int kDefaultSamples = 10;

struct CandidateVerdict {
  bool compiled = false;
  bool functional = false;  // implies compiled
  bool operator==(const CandidateVerdict&) const = default;
};

struct ProblemResult {
  std::string problem_id;
  std::vector<CandidateVerdict> verdicts;

  int n() const { return static_cast<int>(verdicts.size()); }
  int c() const;
  // Throws Error(kInvalidArgument) for an empty id or a functional verdict
  // that did not compile.
  void validate() const;
  bool operator==(const ProblemResult&) const = default;
};

// Probability that a uniformly drawn k-subset of n samples holds at least
// one of the c correct ones. Evaluated as a running product, clamped to
// [0, 1]. Throws Error(kDomain) unless 0 <= c <= n and 1 <= k <= n.
double pass_at_k(int n, int c, int k);

// The same quantity by walking every k-subset of {0..n-1}. Exponential;
// meant for cross-checks with small n.
double pass_at_k_enumerated(int n, int c, int k);

// Fraction of `draws` random k-subsets that hit a correct sample.
double pass_at_k_sampled(int n, int c, int k, uint64_t draws, uint64_t seed);

enum class Criterion { kCompile, kFunctional };

std::string_view criterion_name(Criterion c);
Criterion parse_criterion(std::string_view name);

// Percentage of candidates meeting the criterion over all problems.
// Throws Error(kEmptyInput) when there are no candidates.
double success_rate(const std::vector<ProblemResult>& results, Criterion criterion);

struct ProblemRow {
  std::string problem_id;
  int n = 0;
  int c = 0;
  int compiled = 0;
  std::vector<double> pass;  // one per k
};

struct Report {
  std::vector<int> ks;
  std::vector<double> mean_pass;  // one per k
  std::vector<ProblemRow> rows;
  double compile_rate = 0.0;      // percent
  double functional_rate = 0.0;   // percent
};

// Mean pass@k per k. A k above a problem's n is a domain error.
Report aggregate(const std::vector<ProblemResult>& results, const std::vector<int>& ks);

std::string report_csv(const Report& r);
std::string report_json(const Report& r);

// results.jsonl: one problem per line,
// {"problem_id": .., "verdicts": [{"compiled": .., "functional": ..}, ..]}.
// Optional "n" and "c" fields must agree with the verdicts.
std::string results_jsonl(const std::vector<ProblemResult>& results);
std::vector<ProblemResult> parse_results(std::string_view text);
std::vector<ProblemResult> read_results(const std::filesystem::path& path);
void write_results(const std::filesystem::path& path, const std::vector<ProblemResult>& results);

// Scores generated candidates against a reference design: compile first,
// then the seeded functional check. Candidates that fail to compile are
// recorded as non-functional without simulation.
ProblemResult score_candidates(const validation::Harness& harness, const std::string& problem_id,
                               const std::vector<std::string>& candidates,
                               const std::string& reference, uint64_t stim_seed);

}  // namespace forge::eval

#endif  // FORGE_EVAL_METRICS_H_
