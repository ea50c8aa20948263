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


#include "forge/features/feature_file.h"

#include <nlohmann/json.hpp>

#include <sstream>

#include "forge/embedding/embedding.h"
#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/json_reader.h"

namespace forge::features {

FeatureRow extract(const trace::TokenTrace& trace, const std::string& v_sem_ref,
                   const StatParams& params) {
  const std::vector<size_t> path = trace::final_path(trace);
  const StatFeatures stats = compute_stats(trace::steps_of(trace, path), params);
  FeatureRow row;
  row.trace_id = trace.header.trace_id;
  row.v_stat = stats.values();
  row.punct_absent = stats.punct_absent;
  row.keyword_absent = stats.keyword_absent;
  row.v_sem = embedding::max_pool(trace::hidden_of(trace, path));
  row.v_sem_ref = v_sem_ref;
  row.label = trace.header.label;
  return row;
}

std::string feature_json_line(const FeatureRow& row) {
  nlohmann::ordered_json j;
  j["schema_version"] = kFeatureSchemaVersion;
  j["trace_id"] = row.trace_id;
  j["v_stat"] = row.v_stat;
  j["v_sem"] = row.v_sem;
  j["v_sem_ref"] = row.v_sem_ref;
  j["absent"] = {{"punct", row.punct_absent}, {"keyword", row.keyword_absent}};
  if (row.label) j["label"] = *row.label;
  return j.dump();
}

void write_features(const std::filesystem::path& path, const std::vector<FeatureRow>& rows) {
  std::string out;
  for (const FeatureRow& r : rows) out += feature_json_line(r) + "\n";
  write_file(path, out);
}

std::vector<FeatureRow> parse_features(const std::string& text) {
  std::vector<FeatureRow> rows;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kSchema, where + ": " + e.what());
    }
    JsonReader r(j, where);
    if (r.u64("schema_version") != kFeatureSchemaVersion) r.fail("unsupported schema_version");
    FeatureRow row;
    row.trace_id = r.str("trace_id");
    const Vector stat = r.reals("v_stat");
    if (stat.size() != kNumStatFeatures) {
      r.fail("v_stat has " + std::to_string(stat.size()) + " values, expected " +
             std::to_string(kNumStatFeatures));
    }
    std::copy(stat.begin(), stat.end(), row.v_stat.begin());
    row.v_sem = r.reals("v_sem");
    if (row.v_sem.empty()) r.fail("v_sem is empty");
    row.v_sem_ref = r.str("v_sem_ref");
    JsonReader absent(r.field("absent", nlohmann::json::value_t::object), where + " absent");
    row.punct_absent = absent.boolean("punct");
    row.keyword_absent = absent.boolean("keyword");
    absent.done();
    if (r.optional("label")) {
      const int64_t label = r.i64("label");
      if (label != 0 && label != 1) r.fail("label must be 0 or 1");
      row.label = static_cast<int>(label);
    }
    r.done();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<FeatureRow> read_features(const std::filesystem::path& path) {
  return parse_features(read_file(path));
}

}  // namespace forge::features
