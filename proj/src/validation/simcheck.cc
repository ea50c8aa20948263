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


#include "forge/validation/simcheck.h"

#include <deque>
#include <set>
#include <sstream>

#include "forge/util/error.h"
#include "forge/util/rng.h"

namespace forge::validation {

namespace {

uint64_t mask(int w) { return w >= 64 ? ~0ULL : ((1ULL << w) - 1); }

int total_bits(const std::vector<sim::PortInfo>& ports) {
  int bits = 0;
  for (const auto& p : ports) bits += p.width;
  return bits;
}

// Splits an integer across the ports, first port in the low bits.
std::vector<uint64_t> unpack(uint64_t packed, const std::vector<sim::PortInfo>& ports) {
  std::vector<uint64_t> out;
  for (const auto& p : ports) {
    out.push_back(packed & mask(p.width));
    packed = p.width >= 64 ? 0 : packed >> p.width;
  }
  return out;
}

std::vector<sim::PortInfo> driven_inputs(const sim::Simulator& s, const sim::Clocking& c) {
  std::vector<sim::PortInfo> out;
  for (const auto& p : s.inputs()) {
    if (c.clock && p.name == *c.clock) continue;
    out.push_back(p);
  }
  return out;
}

uint64_t reset_level(const sim::Clocking& c, bool active) {
  return active == c.reset_active_high ? 1 : 0;
}

// Both designs under one driver.
class Pair {
 public:
  Pair(const verilog::Module& a, const verilog::Module& b, const sim::Clocking& clocking)
      : a_(a), b_(b), clocking_(clocking) {
    for (const auto& p : a_.outputs()) outputs_.push_back(p.name);
  }

  void set(const std::string& name, uint64_t v) {
    a_.set_input(name, v);
    b_.set_input(name, v);
  }

  void apply(const std::vector<sim::PortInfo>& inputs, const std::vector<uint64_t>& values) {
    for (size_t i = 0; i < inputs.size(); ++i) set(inputs[i].name, values[i]);
  }

  std::optional<Mismatch> settle_and_compare(size_t step) {
    a_.settle();
    b_.settle();
    for (const auto& name : outputs_) {
      const uint64_t x = a_.value(name);
      const uint64_t y = b_.value(name);
      if (x != y) return Mismatch{step, name, x, y};
    }
    return std::nullopt;
  }

  void idle_inputs(const std::vector<sim::PortInfo>& inputs) {
    for (const auto& p : inputs) set(p.name, 0);
    if (clocking_.reset) set(*clocking_.reset, reset_level(clocking_, false));
    if (clocking_.clock) set(*clocking_.clock, clocking_.clock_posedge ? 0 : 1);
  }

  // One clock cycle: apply inputs, then the active edge, then the inactive
  // edge, comparing after each settle.
  std::optional<Mismatch> cycle(const std::vector<sim::PortInfo>& inputs,
                                const std::vector<uint64_t>& values, size_t step) {
    apply(inputs, values);
    if (auto m = settle_and_compare(step)) return m;
    const std::string& clk = *clocking_.clock;
    set(clk, clocking_.clock_posedge ? 1 : 0);
    if (auto m = settle_and_compare(step)) return m;
    set(clk, clocking_.clock_posedge ? 0 : 1);
    return settle_and_compare(step);
  }

  std::vector<uint64_t> state() const {
    std::vector<uint64_t> s = a_.state();
    const std::vector<uint64_t> t = b_.state();
    s.push_back(~0ULL);
    s.insert(s.end(), t.begin(), t.end());
    return s;
  }

  void set_state(const std::vector<uint64_t>& s) {
    const size_t na = a_.state().size();
    a_.set_state({s.begin(), s.begin() + static_cast<std::ptrdiff_t>(na)});
    b_.set_state({s.begin() + static_cast<std::ptrdiff_t>(na) + 1, s.end()});
  }

 private:
  sim::Simulator a_;
  sim::Simulator b_;
  sim::Clocking clocking_;
  std::vector<std::string> outputs_;
};

}  // namespace

std::string Mismatch::describe() const {
  std::ostringstream os;
  os << "step " << step << ": output '" << output << "' expected " << expected << " got "
     << actual;
  return os.str();
}

Stimulus make_stimulus(const verilog::Module& anchor, uint64_t seed,
                       const StimulusPolicy& policy) {
  const sim::Simulator s(anchor);
  Stimulus st;
  st.clocking = sim::detect_clocking(anchor);
  st.inputs = driven_inputs(s, st.clocking);
  Rng rng(seed);
  auto random_vector = [&] {
    std::vector<uint64_t> v;
    for (const auto& p : st.inputs) v.push_back(rng.next_u64() & mask(p.width));
    return v;
  };
  if (!st.clocking.sequential()) {
    const int bits = total_bits(st.inputs);
    if (bits < 63 && (uint64_t{1} << bits) <= policy.comb_vectors) {
      for (uint64_t x = 0; x < (uint64_t{1} << bits); ++x) {
        st.vectors.push_back(unpack(x, st.inputs));
      }
    } else {
      for (size_t i = 0; i < policy.comb_vectors; ++i) st.vectors.push_back(random_vector());
    }
    return st;
  }
  for (size_t c = 0; c < policy.seq_cycles; ++c) {
    std::vector<uint64_t> v = random_vector();
    if (st.clocking.reset) {
      for (size_t i = 0; i < st.inputs.size(); ++i) {
        if (st.inputs[i].name == *st.clocking.reset) {
          v[i] = reset_level(st.clocking, c < policy.reset_cycles);
        }
      }
    }
    st.vectors.push_back(std::move(v));
  }
  return st;
}

void require_same_ports(const verilog::Module& anchor, const verilog::Module& candidate) {
  const sim::Simulator a(anchor);
  const sim::Simulator b(candidate);
  const auto& pa = a.ports();
  const auto& pb = b.ports();
  bool same = pa.size() == pb.size();
  for (size_t i = 0; same && i < pa.size(); ++i) {
    same = pa[i].name == pb[i].name && pa[i].direction == pb[i].direction &&
           pa[i].width == pb[i].width;
  }
  if (!same) throw Error(ErrorCode::kPortMismatch, "candidate port interface differs from anchor");
}

std::optional<Mismatch> compare_outputs(const verilog::Module& anchor,
                                        const verilog::Module& candidate,
                                        const Stimulus& stimulus) {
  require_same_ports(anchor, candidate);
  Pair pair(anchor, candidate, stimulus.clocking);
  if (!stimulus.clocking.sequential()) {
    for (size_t i = 0; i < stimulus.vectors.size(); ++i) {
      pair.apply(stimulus.inputs, stimulus.vectors[i]);
      if (auto m = pair.settle_and_compare(i)) return m;
    }
    return std::nullopt;
  }
  pair.idle_inputs(stimulus.inputs);
  if (auto m = pair.settle_and_compare(0)) return m;
  for (size_t i = 0; i < stimulus.vectors.size(); ++i) {
    if (auto m = pair.cycle(stimulus.inputs, stimulus.vectors[i], i)) return m;
  }
  return std::nullopt;
}

ProofResult prove_equivalent(const verilog::Module& anchor, const verilog::Module& candidate,
                             const ProofLimits& limits) {
  require_same_ports(anchor, candidate);
  const sim::Clocking clocking = sim::detect_clocking(anchor);
  Pair pair(anchor, candidate, clocking);
  const std::vector<sim::PortInfo> inputs = driven_inputs(sim::Simulator(anchor), clocking);
  const int bits = total_bits(inputs);
  if (bits > limits.exhaustive_input_bits) {
    return {ProofOutcome::kUnknown, std::to_string(bits) + " input bits exceed the exhaustive bound"};
  }
  const uint64_t combos = uint64_t{1} << bits;
  try {
    if (!clocking.sequential()) {
      for (uint64_t x = 0; x < combos; ++x) {
        pair.apply(inputs, unpack(x, inputs));
        if (auto m = pair.settle_and_compare(x)) return {ProofOutcome::kMismatch, m->describe()};
      }
      return {ProofOutcome::kEquivalent,
              "exhaustive over " + std::to_string(combos) + " input vectors"};
    }
    pair.idle_inputs(inputs);
    if (auto m = pair.settle_and_compare(0)) return {ProofOutcome::kMismatch, m->describe()};
    std::set<std::vector<uint64_t>> visited;
    std::deque<std::vector<uint64_t>> frontier;
    visited.insert(pair.state());
    frontier.push_back(pair.state());
    size_t transitions = 0;
    while (!frontier.empty()) {
      const std::vector<uint64_t> s = std::move(frontier.front());
      frontier.pop_front();
      for (uint64_t x = 0; x < combos; ++x) {
        if (++transitions > limits.max_transitions) {
          return {ProofOutcome::kUnknown, "transition budget exhausted"};
        }
        pair.set_state(s);
        if (auto m = pair.cycle(inputs, unpack(x, inputs), transitions)) {
          return {ProofOutcome::kMismatch, m->describe()};
        }
        std::vector<uint64_t> next = pair.state();
        if (visited.insert(next).second) {
          if (visited.size() > limits.max_states) {
            return {ProofOutcome::kUnknown, "reachable state bound exceeded"};
          }
          frontier.push_back(std::move(next));
        }
      }
    }
    return {ProofOutcome::kEquivalent,
            "exhaustive over " + std::to_string(visited.size()) + " reachable states"};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDomain) throw;
    return {ProofOutcome::kUnknown, e.what()};
  }
}

std::string make_testbench(const verilog::Module& anchor, const Stimulus& stimulus,
                           const std::string& gold, const std::string& gate) {
  const sim::Simulator s(anchor);
  std::ostringstream os;
  auto decl = [](const sim::PortInfo& p) {
    return p.width > 1 ? "[" + std::to_string(p.width - 1) + ":0] " : std::string();
  };
  os << "`timescale 1ns/1ps\nmodule forge_tb;\n";
  for (const auto& p : s.inputs()) os << "  reg " << decl(p) << p.name << ";\n";
  for (const auto& p : s.outputs()) {
    os << "  wire " << decl(p) << "gold_" << p.name << ";\n";
    os << "  wire " << decl(p) << "gate_" << p.name << ";\n";
  }
  os << "  integer errors;\n";
  for (const auto& [module, prefix] : {std::pair{gold, "gold_"}, std::pair{gate, "gate_"}}) {
    os << "  " << module << " u_" << prefix << "(";
    bool first = true;
    for (const auto& p : s.ports()) {
      os << (first ? "" : ", ") << "." << p.name << "(";
      if (p.direction == verilog::Direction::kInput) {
        os << p.name;
      } else {
        os << prefix << p.name;
      }
      os << ")";
      first = false;
    }
    os << ");\n";
  }
  os << "  task check;\n    input integer step;\n    begin\n";
  for (const auto& p : s.outputs()) {
    os << "      if (gold_" << p.name << " !== gate_" << p.name << ") begin\n"
       << "        $display(\"MISMATCH step=%0d " << p.name << " %0d %0d\", step, gold_"
       << p.name << ", gate_" << p.name << ");\n"
       << "        errors = errors + 1;\n      end\n";
  }
  os << "    end\n  endtask\n  initial begin\n    errors = 0;\n";
  const auto& c = stimulus.clocking;
  for (const auto& p : s.inputs()) {
    uint64_t v = 0;
    if (c.clock && p.name == *c.clock) v = c.clock_posedge ? 0 : 1;
    if (c.reset && p.name == *c.reset) v = c.reset_active_high ? 0 : 1;
    os << "    " << p.name << " = " << v << ";\n";
  }
  os << "    #1 check(0);\n";
  for (size_t i = 0; i < stimulus.vectors.size(); ++i) {
    os << "   ";
    for (size_t k = 0; k < stimulus.inputs.size(); ++k) {
      os << " " << stimulus.inputs[k].name << " = " << stimulus.inputs[k].width << "'d"
         << stimulus.vectors[i][k] << ";";
    }
    os << " #1 check(" << i << ");";
    if (c.clock) {
      os << " " << *c.clock << " = " << (c.clock_posedge ? 1 : 0) << "; #1 check(" << i
         << "); " << *c.clock << " = " << (c.clock_posedge ? 0 : 1) << "; #1 check(" << i
         << ");";
    }
    os << "\n";
  }
  os << "    $display(\"DONE errors=%0d\", errors);\n    $finish;\n  end\nendmodule\n";
  return os.str();
}

}  // namespace forge::validation
