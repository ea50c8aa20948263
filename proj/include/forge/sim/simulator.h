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


#ifndef FORGE_SIM_SIMULATOR_H_
#define FORGE_SIM_SIMULATOR_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/verilog/ast.h"

namespace forge::sim {

// Two-state, cycle-accurate interpreter for one module of the supported
// subset. Vectors are limited to 64 bits; all arithmetic is unsigned.
// Variables start at zero (or their declaration initializer).

struct PortInfo {
  std::string name;
  verilog::Direction direction = verilog::Direction::kNone;
  int width = 1;
};

struct Clocking {
  std::optional<std::string> clock;
  bool clock_posedge = true;
  std::optional<std::string> reset;
  bool reset_active_high = true;

  bool sequential() const { return clock.has_value(); }
};

class Simulator {
 public:
  // Throws Error(kInvalidArgument) for constructs outside the interpreter.
  explicit Simulator(const verilog::Module& module);
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  const std::vector<PortInfo>& ports() const;
  std::vector<PortInfo> inputs() const;
  std::vector<PortInfo> outputs() const;
  int input_bits() const;

  void set_input(const std::string& name, uint64_t value);
  uint64_t value(const std::string& name) const;
  std::vector<uint64_t> output_values() const;

  // Propagates continuous logic and runs edge-triggered blocks whose
  // sensitivity fired since the last call. Throws Error(kDomain) when the
  // combinational logic oscillates.
  void settle();

  // Every variable and every edge-tracked level, flattened.
  std::vector<uint64_t> state() const;
  void set_state(const std::vector<uint64_t>& state);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Finds clock and reset inputs from edge sensitivity and naming.
Clocking detect_clocking(const verilog::Module& module);

}  // namespace forge::sim

#endif  // FORGE_SIM_SIMULATOR_H_
