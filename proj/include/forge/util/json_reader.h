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


#ifndef FORGE_UTIL_JSON_READER_H_
#define FORGE_UTIL_JSON_READER_H_

#include <nlohmann/json.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "forge/util/error.h"

namespace forge {

// Strict accessors over a JSON object: every requested key must be present
// with the expected type, and done() rejects keys nobody asked for.
// Failures throw Error(kSchema) prefixed with `where`.
class JsonReader {
 public:
  JsonReader(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const nlohmann::json& field(const char* key, nlohmann::json::value_t type) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) fail(std::string("missing field '") + key + "'");
    using T = nlohmann::json::value_t;
    bool ok = it->type() == type;
    if (type == T::number_unsigned) ok = ok || (it->type() == T::number_integer && *it >= 0);
    if (type == T::number_integer) ok = ok || it->type() == T::number_unsigned;
    if (type == T::number_float) ok = ok || it->is_number();
    if (!ok) fail(std::string("field '") + key + "' has the wrong type");
    return *it;
  }

  std::string str(const char* key) {
    return field(key, nlohmann::json::value_t::string).get<std::string>();
  }
  uint64_t u64(const char* key) {
    return field(key, nlohmann::json::value_t::number_unsigned).get<uint64_t>();
  }
  int64_t i64(const char* key) {
    return field(key, nlohmann::json::value_t::number_integer).get<int64_t>();
  }
  double real(const char* key) {
    return field(key, nlohmann::json::value_t::number_float).get<double>();
  }
  bool boolean(const char* key) {
    return field(key, nlohmann::json::value_t::boolean).get<bool>();
  }
  std::vector<double> reals(const char* key) {
    const auto& arr = field(key, nlohmann::json::value_t::array);
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
      if (!v.is_number()) fail(std::string("field '") + key + "' must hold numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  // Marks an optional key as known; true if present and not null.
  bool optional(const char* key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  void done() {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail("unexpected field '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::kSchema, where_ + ": " + msg);
  }

 private:
  const nlohmann::json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

}  // namespace forge

#endif  // FORGE_UTIL_JSON_READER_H_
