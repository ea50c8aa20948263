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


#ifndef FORGE_PIPELINE_PIPELINE_H_
#define FORGE_PIPELINE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "forge/util/error.h"
#include "forge/util/kv_config.h"

namespace forge::pipeline {

// Stage order: dataset, features, clf, sweep, report.
const std::vector<std::string>& stage_names();

// Expands "all", drops duplicates and sorts into dependency order. Throws
// Error(kInvalidArgument) for an unknown stage.
std::vector<std::string> resolve_stages(const std::vector<std::string>& requested);

// The harness-facing module a stage error is attributed to.
std::string stage_component(const std::string& stage);

struct PipelineConfig {
  std::filesystem::path tools_config;  // empty: tool defaults
  std::filesystem::path corpus_dir;
  std::filesystem::path out_dir;
  uint64_t seed = 0;
  std::vector<std::string> stages = {"all"};
  // Per-stage keys such as "dataset.positives", "features.hidden_dim",
  // "clf.epochs", "sweep.step" or "tools.backend".
  KvConfig overrides;

  // Reads [pipeline] corpus/out/seed/stages/tools plus the stage sections
  // of a pipeline TOML file. Relative paths resolve against the file.
  static PipelineConfig load(const std::filesystem::path& path);
};

struct StageOutcome {
  std::string name;
  bool ran = false;  // false: up to date
  double seconds = 0.0;
  std::string summary;
};

struct PipelineResult {
  std::vector<StageOutcome> stages;
  std::filesystem::path manifest;
};

// A stage failed. what() starts with the stage name; component() names
// the module that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, std::string component, const Error& cause);
  const std::string& stage() const { return stage_; }
  const std::string& component() const { return component_; }

 private:
  std::string stage_;
  std::string component_;
};

// Runs the requested stages in order, skipping a stage whose parameters,
// input hashes and output hashes match the manifest. The manifest
// (out_dir/manifest.json) is rewritten after every stage, so a failure
// leaves earlier outputs and their records intact.
PipelineResult run_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr);

// SHA-256 of a file, or of the sorted (relative name, file hash) listing
// of a directory.
std::string content_hash(const std::filesystem::path& path);

}  // namespace forge::pipeline

#endif  // FORGE_PIPELINE_PIPELINE_H_
