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


#ifndef FORGE_VALIDATION_SIMCHECK_H_
#define FORGE_VALIDATION_SIMCHECK_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forge/sim/simulator.h"
#include "forge/verilog/ast.h"

namespace forge::validation {

struct StimulusPolicy {
  size_t comb_vectors = 256;
  size_t seq_cycles = 512;
  size_t reset_cycles = 2;  // length of the single reset pulse
};

// Input sequence for one design interface. Combinational designs get one
// vector per entry (exhaustive when it fits in comb_vectors); sequential
// designs get one vector per clock cycle, reset included as an input.
struct Stimulus {
  std::vector<sim::PortInfo> inputs;  // driven inputs, clock excluded
  sim::Clocking clocking;
  std::vector<std::vector<uint64_t>> vectors;
};

Stimulus make_stimulus(const verilog::Module& anchor, uint64_t seed,
                       const StimulusPolicy& policy = {});

struct Mismatch {
  size_t step = 0;
  std::string output;
  uint64_t expected = 0;
  uint64_t actual = 0;

  std::string describe() const;
};

// Throws Error(kPortMismatch) when the interfaces differ.
void require_same_ports(const verilog::Module& anchor, const verilog::Module& candidate);

// Drives both designs with the stimulus and compares outputs after every
// settle. Throws Error(kDomain) when a design does not settle.
std::optional<Mismatch> compare_outputs(const verilog::Module& anchor,
                                        const verilog::Module& candidate,
                                        const Stimulus& stimulus);

struct ProofLimits {
  int exhaustive_input_bits = 16;
  size_t max_states = 1 << 14;
  size_t max_transitions = 1 << 20;
};

enum class ProofOutcome { kEquivalent, kMismatch, kUnknown };

struct ProofResult {
  ProofOutcome outcome = ProofOutcome::kUnknown;
  std::string detail;
};

// Exhaustive comparison: every input vector for combinational designs, or
// a breadth-first walk over the reachable product state space (from the
// all-zero state) for sequential ones.
ProofResult prove_equivalent(const verilog::Module& anchor, const verilog::Module& candidate,
                             const ProofLimits& limits = {});

// Self-checking testbench instantiating `gold` and `gate` (both with the
// anchor's interface) and replaying the stimulus. Prints "MISMATCH" lines
// and a final "DONE".
std::string make_testbench(const verilog::Module& anchor, const Stimulus& stimulus,
                           const std::string& gold, const std::string& gate);

}  // namespace forge::validation

#endif  // FORGE_VALIDATION_SIMCHECK_H_
