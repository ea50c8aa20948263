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


#include "forge/positive/transforms.h"

#include <gtest/gtest.h>

#include "forge/util/error.h"
#include "forge/verilog/parser.h"
#include "forge/verilog/semantic.h"
#include "support/corpus.h"

namespace forge::positive {
namespace {

using verilog::SourceUnit;

SourceUnit anchor(const std::string& name) {
  return verilog::parse(testing::corpus_source(name));
}

TEST(TransformTest, RenameFullAdder) {
  SourceUnit u = anchor("full_adder");
  Positive p = transform(u, TransformId::kRename, 11);
  ASSERT_EQ(p.record.renaming.size(), 2u);
  EXPECT_TRUE(p.record.renaming.count("sum_int"));
  EXPECT_TRUE(p.record.renaming.count("carry_ab"));
  for (const auto& [from, to] : p.record.renaming) {
    EXPECT_EQ(to[0], 'n');
    EXPECT_EQ(p.source.find(from), std::string::npos);
  }
  SourceUnit pu = verilog::parse(p.source);
  ASSERT_FALSE(pu.has_errors());
  verilog::Module renamed = u.modules[0];
  rename_module(renamed, p.record.renaming);
  EXPECT_EQ(renamed, pu.modules[0]);
  EXPECT_TRUE(alpha_equivalent(u, pu));
}

TEST(TransformTest, RenameAvoidsCollisions) {
  SourceUnit u = verilog::parse(
      "module m(input n0, output n1);\n  wire w;\n  assign w = n0;\n  assign n1 = w;\n"
      "endmodule\n");
  Positive p = transform(u, TransformId::kRename, 3);
  EXPECT_EQ(p.record.renaming.at("w"), "n2");
}

TEST(TransformTest, RenameInapplicableWithoutInternals) {
  try {
    transform(anchor("and_gate"), TransformId::kRename, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransformInapplicable);
  }
}

TEST(TransformTest, DeMorganExample) {
  SourceUnit u = verilog::parse("module m(input a, input b, output y);\n"
                                "  assign y = ~(a & b);\nendmodule\n");
  Positive p = transform(u, TransformId::kDeMorgan, 0);
  EXPECT_NE(p.source.find("assign y = (~a) | (~b);"), std::string::npos) << p.source;
  SourceUnit back = verilog::parse(p.source);
  Positive q = transform(back, TransformId::kDeMorgan, 0);
  EXPECT_NE(q.source.find("assign y = ~(a & b);"), std::string::npos) << q.source;
  EXPECT_FALSE(alpha_equivalent(u, back));
}

TEST(TransformTest, DeMorganNeedsAConnective) {
  SourceUnit u = verilog::parse("module m(input a, output y); assign y = ~a; endmodule");
  EXPECT_THROW(transform(u, TransformId::kDeMorgan, 0), Error);
}

TEST(TransformTest, CommutativeSwapExample) {
  SourceUnit u = verilog::parse("module m(input a, input b, output s);\n"
                                "  assign s = a ^ b;\nendmodule\n");
  Positive p = transform(u, TransformId::kCommutativeSwap, 9);
  EXPECT_NE(p.source.find("assign s = b ^ a;"), std::string::npos);
}

TEST(TransformTest, TernaryRewriteBothWays) {
  SourceUnit dff = anchor("rom");
  Positive p = transform(dff, TransformId::kTernaryRewrite, 0);
  EXPECT_NE(p.source.find("data <= en ? word : data;"), std::string::npos) << p.source;
  p = transform(anchor("d_flip_flop"), TransformId::kTernaryRewrite, 0);
  EXPECT_NE(p.source.find("q <= rst ? 1'b0 : d;"), std::string::npos) << p.source;
  SourceUnit tl = anchor("traffic_light_controller");
  for (uint64_t seed = 0; seed < 16; ++seed) {
    const std::string q = transform(tl, TransformId::kTernaryRewrite, seed).source;
    EXPECT_NE(q.find("if (car || emergency) next_state = YELLOW;"), std::string::npos);
  }
}

TEST(TransformTest, AsyncResetIfIsKept) {
  // The reset branch of a multi-edge block must stay an if statement.
  SourceUnit u = verilog::parse(
      "module r(input clk, input rst, input d, output reg q);\n"
      "  always @(posedge clk or posedge rst) begin\n"
      "    if (rst) q <= 1'b0;\n    else q <= d;\n  end\nendmodule\n");
  try {
    transform(u, TransformId::kTernaryRewrite, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransformInapplicable);
  }
}

TEST(TransformTest, CanonicalNamesIgnoreRenaming) {
  for (const auto& name : {"full_adder", "ram", "traffic_light_controller"}) {
    SourceUnit u = anchor(name);
    SourceUnit r = verilog::parse(transform(u, TransformId::kRename, 4).source);
    const std::string cu = canonical_names_source(u);
    EXPECT_EQ(cu, canonical_names_source(r)) << name;
    EXPECT_TRUE(alpha_equivalent(u, verilog::parse(cu))) << name;
  }
}

TEST(TransformTest, DeclReorderSwapsAdjacentDeclarations) {
  Positive p = transform(anchor("full_adder"), TransformId::kDeclReorder, 0);
  EXPECT_LT(p.source.find("wire carry_ab;"), p.source.find("wire sum_int;"));
}

TEST(TransformTest, AlphaEquivalenceIsReflexive) {
  for (const auto& name : testing::corpus_names()) {
    SourceUnit u = anchor(name);
    EXPECT_TRUE(alpha_equivalent(u, u)) << name;
  }
}

// Every positive parses cleanly, keeps the port interface, and is a
// deterministic function of (anchor, transform, seed).
TEST(TransformPropertyTest, PositivesAreCleanAndKeepPorts) {
  int produced = 0;
  for (const auto& name : testing::corpus_names()) {
    SourceUnit u = anchor(name);
    for (TransformId id : all_transforms()) {
      for (uint64_t seed = 0; seed < 6; ++seed) {
        SCOPED_TRACE(name + " " + std::string(transform_name(id)) + " " + std::to_string(seed));
        Positive p;
        try {
          p = transform(u, id, seed);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::kTransformInapplicable);
          continue;
        }
        ++produced;
        EXPECT_EQ(transform(u, id, seed).source, p.source);
        EXPECT_NE(p.source, u.source);
        verilog::FrontendCheck check = verilog::check_source(p.source);
        ASSERT_TRUE(check.ok()) << check.summary() << p.source;
        const auto& pm = check.unit.modules[0];
        EXPECT_EQ(pm.port_names(), u.modules[0].port_names());
        EXPECT_EQ(pm.ansi_ports, u.modules[0].ansi_ports);
        if (id == TransformId::kRename) EXPECT_TRUE(alpha_equivalent(u, check.unit));
      }
    }
  }
  EXPECT_GT(produced, 100);
}

TEST(TransformPropertyTest, GeneratePositivesDistinct) {
  for (const auto& name : testing::corpus_names()) {
    SourceUnit u = anchor(name);
    auto ps = generate_positives(u, 3, 5);
    // Tiny designs may offer fewer distinct rewrites than requested.
    EXPECT_GE(ps.size(), 1u) << name;
    EXPECT_LE(ps.size(), 3u) << name;
    if (name == "full_adder" || name == "traffic_light_controller") EXPECT_EQ(ps.size(), 3u);
    for (size_t i = 0; i < ps.size(); ++i) {
      for (size_t j = i + 1; j < ps.size(); ++j) EXPECT_NE(ps[i].source, ps[j].source);
    }
  }
}

}  // namespace
}  // namespace forge::positive
