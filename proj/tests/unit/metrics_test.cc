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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <tuple>

#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/process.h"
#include "forge/util/rng.h"
#include "forge/validation/harness.h"
#include "support/corpus.h"

namespace forge::eval {
namespace {

uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
  return r;
}

// Ratio of exact integer binomials.
double binomial_oracle(int n, int c, int k) {
  return 1.0 - static_cast<double>(choose(n - c, k)) / static_cast<double>(choose(n, k));
}

ProblemResult problem(const std::string& id, int n, int c, int compiled = -1) {
  if (compiled < 0) compiled = c;
  ProblemResult p;
  p.problem_id = id;
  for (int i = 0; i < n; ++i) p.verdicts.push_back({i < compiled, i < c});
  return p;
}

TEST(PassAtKTest, Examples) {
  for (int k = 1; k <= 10; ++k) EXPECT_EQ(pass_at_k(10, 0, k), 0.0);
  EXPECT_EQ(pass_at_k(10, 10, 1), 1.0);
  EXPECT_NEAR(pass_at_k(10, 2, 5), 1.0 - 56.0 / 252.0, 1e-15);
  EXPECT_NEAR(pass_at_k(10, 2, 5), 0.77778, 5e-6);
  EXPECT_EQ(pass_at_k_enumerated(10, 2, 5), 196.0 / 252.0);
  EXPECT_DOUBLE_EQ(pass_at_k(10, 3, 1), 0.3);
}

TEST(PassAtKTest, MatchesSubsetEnumerationForSmallN) {
  int cases = 0;
  for (int n = 1; n <= 10; ++n) {
    for (int c = 0; c <= n; ++c) {
      for (int k = 1; k <= n; ++k) {
        const double p = pass_at_k(n, c, k);
        EXPECT_NEAR(p, pass_at_k_enumerated(n, c, k), 1e-12) << n << " " << c << " " << k;
        EXPECT_NEAR(p, binomial_oracle(n, c, k), 1e-12) << n << " " << c << " " << k;
        ++cases;
      }
    }
  }
  EXPECT_EQ(cases, 440);
}

TEST(PassAtKTest, MonotoneInKAndC) {
  for (int n = 1; n <= 40; ++n) {
    for (int c = 0; c <= n; ++c) {
      for (int k = 1; k <= n; ++k) {
        const double p = pass_at_k(n, c, k);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        if (k < n) EXPECT_LE(p, pass_at_k(n, c, k + 1));
        if (c < n) EXPECT_LE(p, pass_at_k(n, c + 1, k));
      }
      EXPECT_EQ(pass_at_k(n, c, n) == 1.0, c >= 1);
    }
  }
}

TEST(PassAtKTest, LargeNStaysFinite) {
  EXPECT_NEAR(pass_at_k(1000, 1, 1), 0.001, 1e-15);
  EXPECT_NEAR(pass_at_k(200000, 100, 50), 1.0 - std::pow(1.0 - 100.0 / 200000.0, 50), 1e-5);
  EXPECT_EQ(pass_at_k(1000, 999, 2), 1.0);
}

TEST(PassAtKTest, MonteCarloAgrees) {
  Rng rng(2026);
  for (int trial = 0; trial < 4; ++trial) {
    const int c = static_cast<int>(rng.below(11));
    const int k = 1 + static_cast<int>(rng.below(10));
    const double mc = pass_at_k_sampled(10, c, k, 1000000, 77 + trial);
    EXPECT_NEAR(mc, pass_at_k(10, c, k), 0.003) << "c=" << c << " k=" << k;
  }
}

TEST(PassAtKTest, DomainErrors) {
  for (auto [n, c, k] : std::vector<std::tuple<int, int, int>>{
           {10, 11, 1}, {10, -1, 1}, {10, 2, 0}, {10, 2, 11}, {0, 0, 1}}) {
    try {
      pass_at_k(n, c, k);
      ADD_FAILURE() << n << " " << c << " " << k;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kDomain);
    }
  }
}

TEST(SuccessRateTest, Examples) {
  EXPECT_EQ(success_rate({problem("p", 100, 50, 94)}, Criterion::kCompile), 94.0);
  EXPECT_EQ(success_rate({problem("p", 10, 0, 0)}, Criterion::kFunctional), 0.0);
  EXPECT_EQ(success_rate({problem("a", 10, 2, 5), problem("b", 10, 6, 10)}, Criterion::kCompile),
            75.0);
  try {
    success_rate({}, Criterion::kCompile);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
  EXPECT_EQ(parse_criterion("functional"), Criterion::kFunctional);
  EXPECT_THROW(parse_criterion("synth"), Error);
}

TEST(SuccessRateTest, FunctionalNeverExceedsCompile) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ProblemResult> rs;
    const int problems = 1 + static_cast<int>(rng.below(6));
    for (int i = 0; i < problems; ++i) {
      ProblemResult p;
      p.problem_id = "p" + std::to_string(i);
      const int n = 1 + static_cast<int>(rng.below(12));
      for (int j = 0; j < n; ++j) {
        const bool compiled = rng.bernoulli(0.7);
        p.verdicts.push_back({compiled, compiled && rng.bernoulli(0.5)});
      }
      rs.push_back(p);
    }
    EXPECT_LE(success_rate(rs, Criterion::kFunctional), success_rate(rs, Criterion::kCompile));
  }
  ProblemResult bad = problem("x", 2, 0);
  bad.verdicts[0].functional = true;
  EXPECT_THROW(success_rate({bad}, Criterion::kCompile), Error);
}

TEST(AggregateTest, Examples) {
  const Report r = aggregate({problem("all", 10, 10), problem("none", 10, 0)}, {1});
  EXPECT_EQ(r.mean_pass[0], 0.5);
  const Report single = aggregate({problem("one", 10, 2)}, {1, 5, 10});
  EXPECT_EQ(single.mean_pass[0], pass_at_k(10, 2, 1));
  EXPECT_EQ(single.mean_pass[1], pass_at_k(10, 2, 5));
  EXPECT_EQ(single.mean_pass[2], 1.0);
  EXPECT_THROW(aggregate({problem("short", 3, 1)}, {5}), Error);
  EXPECT_THROW(aggregate({}, {1}), Error);
}

TEST(AggregateTest, Reports) {
  const Report r = aggregate({problem("a", 10, 3, 8), problem("b,c", 10, 0, 4)}, {1, 5});
  EXPECT_EQ(r.compile_rate, 60.0);
  EXPECT_EQ(r.functional_rate, 15.0);
  const std::string csv = report_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "problem_id,n,c,compiled,pass@1,pass@5");
  EXPECT_NE(csv.find("\na,10,3,8,0.300000,"), std::string::npos);
  EXPECT_NE(csv.find("\n\"b,c\",10,0,4,0.000000,0.000000\n"), std::string::npos);
  EXPECT_NE(csv.find("\nmean,,,,0.150000,"), std::string::npos);
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_DOUBLE_EQ(j["mean"]["pass@1"].get<double>(), 0.15);
  EXPECT_EQ(j["problems"].size(), 2u);
  EXPECT_EQ(j["problems"][0]["pass@5"].get<double>(), pass_at_k(10, 3, 5));
}

TEST(ResultsFileTest, RoundTrip) {
  const std::vector<ProblemResult> rs = {problem("a", 10, 3, 8), problem("b", 4, 0, 0)};
  ScratchDir dir;
  write_results(dir.path() / "results.jsonl", rs);
  EXPECT_EQ(read_results(dir.path() / "results.jsonl"), rs);
  // n and c are optional on input.
  const auto parsed = parse_results(
      "\n{\"problem_id\":\"x\",\"verdicts\":[{\"compiled\":true,\"functional\":false}]}\n");
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].n(), 1);
}

TEST(ResultsFileTest, SchemaErrorsNameTheLine) {
  const std::vector<std::string> bad = {
      "{\"problem_id\":\"x\",\"verdicts\":[{\"compiled\":false,\"functional\":true}]}",
      "{\"problem_id\":\"x\",\"n\":2,\"verdicts\":[{\"compiled\":true,\"functional\":true}]}",
      "{\"problem_id\":\"x\",\"c\":0,\"verdicts\":[{\"compiled\":true,\"functional\":true}]}",
      "{\"problem_id\":\"x\",\"verdicts\":[{\"compiled\":true}]}",
      "{\"problem_id\":\"x\",\"verdicts\":[],\"extra\":1}",
      "not json",
  };
  for (const std::string& line : bad) {
    try {
      parse_results("{\"problem_id\":\"ok\",\"verdicts\":[]}\n" + line + "\n");
      ADD_FAILURE() << line;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kSchema) << line;
      EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
  }
}

TEST(ScoreCandidatesTest, CompileFailuresAreNotSimulated) {
  validation::ToolConfig cfg = validation::ToolConfig::defaults();
  cfg.backend = validation::Backend::kInternal;
  const validation::Harness harness(cfg);
  const std::string ref = forge::testing::corpus_source("half_adder");
  std::string wrong = ref;
  wrong.replace(wrong.find('^'), 1, "|");
  std::string broken = ref;
  broken.replace(broken.find("endmodule"), 9, "");
  const ProblemResult p = score_candidates(harness, "half_adder", {ref, wrong, broken}, ref, 1);
  ASSERT_EQ(p.n(), 3);
  EXPECT_EQ(p.verdicts[0], (CandidateVerdict{true, true}));
  EXPECT_EQ(p.verdicts[1], (CandidateVerdict{true, false}));
  EXPECT_EQ(p.verdicts[2], (CandidateVerdict{false, false}));
  EXPECT_EQ(p.c(), 1);
}

}  // namespace
}  // namespace forge::eval
