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


#include "forge/mutation/mutation.h"

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "forge/util/error.h"
#include "forge/verilog/parser.h"
#include "forge/verilog/semantic.h"
#include "support/corpus.h"

namespace forge::mutation {
namespace {

using verilog::SourceUnit;

SourceUnit anchor(const std::string& name) {
  return verilog::parse(testing::corpus_source(name));
}

TEST(MutationRulesTest, FamiliesAndIds) {
  const auto& rules = list_rules();
  EXPECT_EQ(rules.size(), 17u);
  std::map<Family, int> counts;
  std::set<std::string> ids;
  for (const auto& r : rules) {
    ++counts[r.family];
    ids.insert(r.id);
    EXPECT_FALSE(r.description.empty());
  }
  EXPECT_EQ(ids.size(), rules.size());
  EXPECT_EQ(counts.size(), 5u);
  EXPECT_EQ(counts[Family::kPunctuation], 4);
  EXPECT_EQ(counts[Family::kKeyword], 3);
  EXPECT_EQ(counts[Family::kOperator], 4);
  EXPECT_EQ(counts[Family::kDeclaration], 4);
  EXPECT_EQ(counts[Family::kStructural], 2);
  EXPECT_THROW(find_rule("Z9"), Error);
  EXPECT_EQ(parse_family("keyword"), Family::kKeyword);
}

TEST(MutationSitesTest, SemicolonsOfFullAdder) {
  EXPECT_GE(enumerate_sites(anchor("full_adder"), find_rule("P1")).size(), 3u);
}

TEST(MutationSitesTest, AssignmentConfusionOnCombinationalDesign) {
  SourceUnit u = anchor("and_gate");
  auto sites = enumerate_sites(u, find_rule("O1"));
  ASSERT_EQ(sites.size(), 1u);
  EXPECT_EQ(u.source.substr(sites[0].span.begin, sites[0].span.size()), "=");
  EXPECT_EQ(sites[0].replacement, "<=");
}

TEST(MutationSitesTest, MultipleDriversOnFlipFlop) {
  SourceUnit u = anchor("d_flip_flop");
  auto sites = enumerate_sites(u, find_rule("S2"));
  ASSERT_GE(sites.size(), 1u);
  EXPECT_NE(sites[0].replacement.find("assign q = "), std::string::npos);
}

TEST(MutationSitesTest, InapplicableRuleYieldsNothing) {
  EXPECT_TRUE(enumerate_sites(anchor("and_gate"), find_rule("O2")).empty());
  EXPECT_TRUE(mutate(anchor("and_gate"), find_rule("P4"), 1).empty());
}

TEST(MutationSitesTest, InvalidAnchorRejected) {
  SourceUnit broken = verilog::parse("module m(input a, output y); assign y = a endmodule");
  EXPECT_THROW(enumerate_sites(broken, find_rule("P1")), Error);
}

const Mutant* find_mutant(const std::vector<Mutant>& ms, const std::string& needle) {
  for (const auto& m : ms) {
    if (m.source.find(needle) != std::string::npos) return &m;
  }
  return nullptr;
}

TEST(MutateTest, WorkedExamples) {
  SourceUnit u = anchor("and_gate");
  auto p1 = mutate(u, find_rule("P1"), 3, 100);
  EXPECT_NE(find_mutant(p1, "assign y = a & b\n"), nullptr);
  auto k1 = mutate(u, find_rule("K1"), 3, 100);
  const Mutant* typo = find_mutant(k1, "endmodul\n");
  ASSERT_NE(typo, nullptr);
  EXPECT_EQ(typo->record.original_text, "endmodule");
  EXPECT_EQ(typo->record.mutated_text, "endmodul");
  auto o3 = mutate(u, find_rule("O3"), 3, 100);
  ASSERT_EQ(o3.size(), 1u);
  EXPECT_NE(o3[0].source.find("assign y = a | b;"), std::string::npos);
}

TEST(MutateTest, HalfAdderXorBecomesOr) {
  auto o3 = mutate(anchor("half_adder"), find_rule("O3"), 0, 100);
  EXPECT_NE(find_mutant(o3, "a | b"), nullptr);
  EXPECT_NE(find_mutant(o3, "a & b"), nullptr);
}

TEST(MutateTest, SamplingCapsAndIsDeterministic) {
  SourceUnit u = anchor("traffic_light_controller");
  const auto& k1 = find_rule("K1");
  ASSERT_GT(enumerate_sites(u, k1).size(), 10u);
  auto a = mutate(u, k1, 42, 10);
  auto b = mutate(u, k1, 42, 10);
  auto c = mutate(u, k1, 43, 10);
  ASSERT_EQ(a.size(), 10u);
  std::vector<std::string> sa, sb, sc;
  for (const auto& m : a) sa.push_back(m.source);
  for (const auto& m : b) sb.push_back(m.source);
  for (const auto& m : c) sc.push_back(m.source);
  EXPECT_EQ(sa, sb);
  EXPECT_NE(sa, sc);
  EXPECT_EQ(mutate_family(u, Family::kPunctuation, 5).size(), 10u);
}

// Properties over every corpus anchor, rule and a handful of seeds.
TEST(MutationPropertyTest, MinimalNonIdentityDeterministicAndClassified) {
  for (const auto& name : testing::corpus_names()) {
    SourceUnit u = anchor(name);
    for (const auto& rule : list_rules()) {
      for (uint64_t seed : {1ull, 7ull, 1234567ull}) {
        SCOPED_TRACE(name + " " + rule.id + " seed " + std::to_string(seed));
        auto mutants = mutate(u, rule, seed, 10);
        auto again = mutate(u, rule, seed, 10);
        ASSERT_EQ(mutants.size(), again.size());
        std::set<std::string> distinct;
        for (size_t i = 0; i < mutants.size(); ++i) {
          const Mutant& m = mutants[i];
          EXPECT_EQ(m.source, again[i].source);
          EXPECT_NE(m.source, u.source);
          EXPECT_TRUE(distinct.insert(m.source).second);
          EXPECT_EQ(apply_record(u.source, m.record), m.source);
          auto hunk = diff_hunk(u.source, m.source);
          ASSERT_TRUE(hunk.has_value());
          // The only differing region is no larger than the recorded edit.
          EXPECT_LE(hunk->in_a.size(), m.record.site.size());
          EXPECT_LE(hunk->in_b.size(), m.record.mutated_text.size());
          if (statically_invalid(rule.id)) {
            EXPECT_FALSE(verilog::check_source(m.source).ok()) << m.source;
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace forge::mutation
