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

#ifndef FORGE_TESTS_SUPPORT_CORPUS_H_
#define FORGE_TESTS_SUPPORT_CORPUS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "forge/util/io.h"

namespace forge::testing {

inline std::filesystem::path corpus_dir() {
  return std::filesystem::path(FORGE_SOURCE_DIR) / "corpus";
}

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> kNames = {
      "and_gate",  "or_gate",    "not_gate", "xor_gate", "half_adder",
      "full_adder", "comparator", "mux",     "decoder",  "encoder",
      "d_flip_flop", "counter",   "ram",     "rom",      "traffic_light_controller"};
  return kNames;
}

inline std::string corpus_source(const std::string& module_name) {
  return read_file(corpus_dir() / (module_name + ".v"));
}

}  // namespace forge::testing

#endif  // FORGE_TESTS_SUPPORT_CORPUS_H_
